#pragma once

// Test-only oracles, kept deliberately naive and independent of the library's
// optimized code paths.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "sqperm/permutation.hpp"

namespace testutil {

// Definitional order-isomorphism: equal patterns computed by sorting.
inline bool iso_naive(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  auto rank = [](const std::vector<int>& v) {
    std::vector<int> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      int c = 0;
      for (size_t j = 0; j < v.size(); ++j) c += v[j] < v[i];
      r[i] = c;
    }
    return r;
  };
  return rank(a) == rank(b);
}

// First square by the definitional double loop: smallest start, then
// smallest half-length, no structural shortcuts.
inline std::optional<std::pair<int, int>> find_square_naive(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  for (int k = 0; k + 4 <= n; ++k) {
    for (int l = 2; k + 2 * l <= n; ++l) {
      std::vector<int> a(p.begin() + k, p.begin() + k + l);
      std::vector<int> b(p.begin() + k + l, p.begin() + k + 2 * l);
      if (iso_naive(a, b)) return std::make_pair(k, l);
    }
  }
  return std::nullopt;
}

inline bool square_free_naive(const std::vector<int>& p) { return !find_square_naive(p); }

// All squares, for property tests over every location.
inline std::vector<std::pair<int, int>> all_squares_naive(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  std::vector<std::pair<int, int>> out;
  for (int k = 0; k + 4 <= n; ++k) {
    for (int l = 2; k + 2 * l <= n; ++l) {
      std::vector<int> a(p.begin() + k, p.begin() + k + l);
      std::vector<int> b(p.begin() + k + l, p.begin() + k + 2 * l);
      if (iso_naive(a, b)) out.emplace_back(k, l);
    }
  }
  return out;
}

// Applies f to every permutation of length n in lexicographic order.
inline void for_each_permutation(int n, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> v(static_cast<size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  do {
    f(v);
  } while (std::next_permutation(v.begin(), v.end()));
}

inline uint64_t count_permutations_where(int n, const std::function<bool(const std::vector<int>&)>& pred) {
  uint64_t c = 0;
  for_each_permutation(n, [&](const std::vector<int>& v) {
    if (pred(v)) ++c;
  });
  return c;
}

// Random permutation of length n satisfying the up-up-down-down condition,
// built by backtracking over values with only the 4-periodic step constraint
// (such permutations may well contain long squares).
inline std::vector<int> random_uudd(int n, std::mt19937& rng) {
  std::vector<int> cur;
  std::vector<char> used(static_cast<size_t>(n), 0);
  auto ok_step = [&](int v) {
    const int d = static_cast<int>(cur.size());
    if (d == 0) return true;
    if (d >= 3) {
      // step d-3 and step d-1 must disagree
      const bool up_prev = cur[static_cast<size_t>(d - 3)] < cur[static_cast<size_t>(d - 2)];
      const bool up_new = cur.back() < v;
      if (up_prev == up_new) return false;
    }
    return true;
  };
  std::function<bool()> rec = [&]() -> bool {
    const int d = static_cast<int>(cur.size());
    if (d == n) return true;
    std::vector<int> cands;
    for (int v = 0; v < n; ++v) {
      if (!used[static_cast<size_t>(v)] && ok_step(v)) cands.push_back(v);
    }
    std::shuffle(cands.begin(), cands.end(), rng);
    for (int v : cands) {
      cur.push_back(v);
      used[static_cast<size_t>(v)] = 1;
      if (rec()) return true;
      used[static_cast<size_t>(v)] = 0;
      cur.pop_back();
    }
    return false;
  };
  rec();
  return cur;
}

inline sqperm::Permutation perm(std::vector<int> v) { return sqperm::Permutation(std::move(v)); }

}  // namespace testutil
