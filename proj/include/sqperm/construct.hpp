#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sqperm/crucial.hpp"
#include "sqperm/errors.hpp"
#include "sqperm/permutation.hpp"
#include "sqperm/search.hpp"
#include "sqperm/squares.hpp"

namespace sqperm {

// ---------------------------------------------------------------------------
// Fixed building blocks
// ---------------------------------------------------------------------------

/// Left-crucial 9-entry prefix used by the odd-length (8k+3) construction.
inline const std::vector<int> kOddPrefix9{0, 6, 5, 2, 4, 7, 3, 1, 8};

/// Right-crucial 11-entry suffix pattern used by the odd-length construction.
inline const std::vector<int> kOddSuffix11{3, 8, 5, 2, 4, 9, 1, 0, 7, 10, 6};

/// Pattern of the first 16 entries of every odd-family output (the seed
/// begins with the pattern (2,1,0), which pins the first middle entries).
inline const std::vector<int> kOddFirst16{0, 6, 5, 2, 4, 7, 3, 1, 8, 14, 13, 9, 12, 15, 11, 10};

/// Pattern of the last 18 entries of every odd-family output.
inline const std::vector<int> kOddLast18{5, 4, 0, 3, 6, 2, 1, 10, 15, 12, 9, 11, 16, 8, 7, 14, 17, 13};

/// Left-crucial 32-entry prefix used by the even-length construction.
inline const std::vector<int> kEvenPrefix32{8,  2,  0,  20, 29, 19, 3,  4,  7,  5,  1,
                                            30, 31, 21, 6,  9,  22, 12, 10, 24, 26, 23,
                                            13, 14, 17, 15, 11, 27, 28, 25, 16, 18};

/// Right-crucial patterns of the last (suffix length + 7) entries of the
/// even-length construction, one per suffix length 7, 9, 11, 13.
inline const std::array<std::vector<int>, 4> kEvenTailPatterns{{
    {0, 4, 7, 3, 1, 2, 8, 6, 5, 11, 13, 10, 9, 12},
    {0, 4, 7, 3, 1, 2, 8, 6, 5, 13, 15, 12, 10, 11, 14, 9},
    {0, 4, 7, 3, 1, 2, 8, 6, 5, 12, 13, 11, 9, 10, 16, 15, 14, 17},
    {0, 9, 12, 8, 1, 7, 13, 11, 10, 14, 15, 6, 3, 4, 17, 16, 5, 18, 19, 2},
}};

namespace detail {

// Even-construction suffixes as (region, offset) pairs; region 2, 4 and 6
// select the bands r_2, r_4 and r_6. The 9-entry suffix carries offset 5 (not
// a second 6) at position 7, which is what its stated pattern
// (1,0,6,8,5,3,4,7,2) requires.
struct SuffixEntry {
  int region;
  int offset;
};
inline const std::array<std::vector<SuffixEntry>, 4> kEvenSuffixes{{
    {{4, 1}, {4, 0}, {6, 2}, {6, 4}, {6, 1}, {6, 0}, {6, 3}},
    {{4, 1}, {4, 0}, {6, 4}, {6, 6}, {6, 3}, {6, 1}, {6, 2}, {6, 5}, {6, 0}},
    {{4, 1}, {4, 0}, {6, 3}, {6, 4}, {6, 2}, {6, 0}, {6, 1}, {6, 7}, {6, 6}, {6, 5}, {6, 8}},
    {{4, 1}, {4, 0}, {6, 0}, {6, 1}, {2, 4}, {2, 1}, {2, 2}, {6, 3}, {6, 2}, {2, 3}, {6, 4},
     {6, 5}, {2, 0}},
}};

}  // namespace detail

// ---------------------------------------------------------------------------
// Feasibility
// ---------------------------------------------------------------------------

/// Whether a bicrucial permutation of length n exists: n = 9, odd n >= 13, or
/// even n >= 32 other than 38.
inline bool exists_bicrucial(int n) {
  if (n < 1) throw InvalidInput("length must be at least 1");
  if (n % 2 == 1) return n == 9 || n >= 13;
  return n >= 32 && n != 38;
}

// ---------------------------------------------------------------------------
// High-medium-low doubling
// ---------------------------------------------------------------------------

/// Band assignment for doubling a square-free permutation of length m into a
/// square-free one of length 2m: even indices carry the seed shifted into the
/// medium band, indices 1 mod 4 the low pool and indices 3 mod 4 the high
/// pool, each pool assigned in increasing order of index.
struct HmlSpec {
  Permutation core;
  std::vector<int> low_pool;
  std::vector<int> high_pool;
  int medium_offset = 0;

  static HmlSpec for_core(const Permutation& core) {
    if (!is_square_free(core)) throw NotSquareFree("hml doubling requires a square-free seed");
    const int m = core.size();
    HmlSpec s;
    s.core = core;
    s.medium_offset = (m + 1) / 2;
    for (int v = 0; v < s.medium_offset; ++v) s.low_pool.push_back(v);
    for (int v = s.medium_offset + m; v < 2 * m; ++v) s.high_pool.push_back(v);
    return s;
  }
};

/// Doubles a square-free permutation of length m >= 1 into a square-free
/// permutation of length 2m satisfying the up-up-down-down condition.
inline Permutation hml_double(const Permutation& core) {
  if (core.size() < 1) throw InvalidInput("seed must be non-empty");
  const HmlSpec spec = HmlSpec::for_core(core);
  const int m = core.size();
  std::vector<int> out(static_cast<size_t>(2 * m));
  size_t low_next = 0, high_next = 0;
  for (int i = 0; i < 2 * m; ++i) {
    if (i % 2 == 0) {
      out[static_cast<size_t>(i)] = core[i / 2] + spec.medium_offset;
    } else if (i % 4 == 1) {
      out[static_cast<size_t>(i)] = spec.low_pool[low_next++];
    } else {
      out[static_cast<size_t>(i)] = spec.high_pool[high_next++];
    }
  }
  return Permutation::unchecked(std::move(out));
}

// ---------------------------------------------------------------------------
// Square-free seeds
// ---------------------------------------------------------------------------

namespace detail {

// Visits square-free permutations of length m, optionally constrained to a
// given pattern of the first three entries, in lexicographic order of the
// value vector. The callback returns false to stop the walk.
inline void for_each_square_free_lex(int m, const std::optional<std::array<int, 3>>& start,
                                     const std::function<bool(std::span<const int>)>& f) {
  std::vector<int> cur;
  cur.reserve(static_cast<size_t>(m));
  std::vector<char> used(static_cast<size_t>(m), 0);
  bool stop = false;
  auto rec = [&](auto&& self) -> void {
    if (stop) return;
    const int d = static_cast<int>(cur.size());
    if (d == m) {
      stop = !f(cur);
      return;
    }
    for (int v = 0; v < m && !stop; ++v) {
      if (used[static_cast<size_t>(v)]) continue;
      if (start) {
        if (d == 1 && (((*start)[0] < (*start)[1]) != (cur[0] < v))) continue;
        if (d == 2) {
          const std::array<int, 3> probe{cur[0], cur[1], v};
          if (!order_isomorphic(std::span<const int>(probe), std::span<const int>(*start))) continue;
        }
      }
      cur.push_back(v);
      used[static_cast<size_t>(v)] = 1;
      if (!square_at_back(cur)) self(self);
      used[static_cast<size_t>(v)] = 0;
      cur.pop_back();
    }
  };
  rec(rec);
}

}  // namespace detail

/// Lexicographically least square-free permutation of length m, optionally
/// with a prescribed pattern of the first three entries.
inline Permutation seed_square_free(int m, std::optional<std::array<int, 3>> start = std::nullopt) {
  if (m < 1) throw InvalidInput("length must be at least 1");
  if (start && m < 3) throw InvalidInput("a start pattern needs length at least 3");
  std::optional<Permutation> found;
  detail::for_each_square_free_lex(m, start, [&](std::span<const int> p) {
    found = Permutation::unchecked(std::vector<int>(p.begin(), p.end()));
    return false;
  });
  if (!found) throw Unsatisfiable("no square-free permutation with the requested start");
  return *found;
}

namespace detail {

// Square-free permutation of length k (k = 1 mod 4, k >= 5) whose second
// entry is the maximum of the first three and whose last entry is k-1, built
// by interleaving a doubled square-free seed of length (k-1)/2 with high and
// low bands, starting on a medium entry, then appending the maximum.
inline Permutation assemble_capped_seed(const Permutation& half_seed, int k) {
  const int q = (k - 1) / 4;        // size of each of the low and high bands
  const int med_lo = q;             // mediums occupy [q, q + (k-1)/2)
  const int high_lo = q + (k - 1) / 2;
  std::vector<int> out(static_cast<size_t>(k));
  int low_next = 0, high_next = 0;
  for (int i = 0; i <= k - 2; ++i) {
    if (i % 2 == 0) {
      out[static_cast<size_t>(i)] = med_lo + half_seed[i / 2];
    } else if (i % 4 == 1) {
      out[static_cast<size_t>(i)] = high_lo + high_next++;
    } else {
      out[static_cast<size_t>(i)] = low_next++;
    }
  }
  out[static_cast<size_t>(k - 1)] = k - 1;
  return Permutation::unchecked(std::move(out));
}

}  // namespace detail

/// Square-free permutation of length k with the maximum of its first three
/// entries in position 1 (so it begins up-down) and its overall maximum last.
/// Requires k >= 5 with k = 1 mod 4.
inline Permutation seed_square_free_max_last(int k) {
  if (k < 5 || k % 4 != 1) throw BadLength("length must be at least 5 and equal 1 mod 4");
  const Permutation half = seed_square_free((k - 1) / 2);
  Permutation out = detail::assemble_capped_seed(half, k);
  if (!is_square_free(out) || out[k - 1] != k - 1 ||
      std::max({out[0], out[1], out[2]}) != out[1]) {
    throw VerificationFailed("capped seed failed its self-check");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Region layouts
// ---------------------------------------------------------------------------

/// Non-decreasing boundaries r_0 = 0 <= r_1 <= ... <= r_K = n partitioning
/// value space into the bands a construction assigns entries from.
struct RegionLayout {
  std::vector<int> boundaries;

  int regions() const { return static_cast<int>(boundaries.size()) - 1; }
  int size(int i) const { return boundaries[static_cast<size_t>(i) + 1] - boundaries[static_cast<size_t>(i)]; }
  int base(int i) const { return boundaries[static_cast<size_t>(i)]; }

  void check(int n) const {
    if (boundaries.empty() || boundaries.front() != 0 || boundaries.back() != n) {
      throw VerificationFailed("region layout does not span [0, n)");
    }
    for (size_t i = 1; i < boundaries.size(); ++i) {
      if (boundaries[i] < boundaries[i - 1]) throw VerificationFailed("region boundaries decrease");
    }
  }
};

/// Value bands for the length 8k+3 construction:
/// prefix 9, lows (m+1)/2, mediums m, highs (m+1)/2, suffix 11, with
/// m = (n-21)/2.
inline RegionLayout layout_for_8k_plus_3(int n) {
  if (n % 8 != 3 || n < 27) throw BadLength("length must be 8k+3 with k >= 3");
  const int m = (n - 21) / 2;
  RegionLayout lay;
  lay.boundaries = {0, 9, 9 + (m + 1) / 2, 9 + (m + 1) / 2 + m, 9 + (m + 1) / 2 + m + (m + 1) / 2, n};
  lay.check(n);
  return lay;
}

/// The even construction's suffix length (7, 9, 11 or 13) and middle seed
/// length k: the unique pair with n = 31 + 2k + suffix_len, k >= 5, k = 1 mod 4.
struct EvenPlan {
  int suffix_len = 0;
  int k = 0;
  RegionLayout layout;
};

inline EvenPlan plan_for_even(int n) {
  if (n % 2 != 0 || n < 48) throw BadLength("length must be even and at least 48");
  for (int idx = 0; idx < 4; ++idx) {
    const int l = 7 + 2 * idx;
    const int num = n - 31 - l;
    if (num % 2 != 0) continue;
    const int k = num / 2;
    if (k >= 5 && k % 4 == 1) {
      EvenPlan plan;
      plan.suffix_len = l;
      plan.k = k;
      int r6_size = 0;
      for (const auto& e : detail::kEvenSuffixes[static_cast<size_t>(idx)]) {
        if (e.region == 6) r6_size = std::max(r6_size, e.offset + 1);
      }
      const int r1 = 32;
      const int r2 = r1 + (k - 1) / 2;
      const int r3 = r2 + (l == 13 ? 5 : 0);
      const int r4 = r3 + (k - 1);
      const int r5 = r4 + 2;
      const int r6 = r5 + (k + 1) / 2;
      plan.layout.boundaries = {0, r1, r2, r3, r4, r5, r6, r6 + r6_size};
      plan.layout.check(n);
      return plan;
    }
  }
  throw BadLength("no suffix length fits this even length");
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

namespace detail {

inline Permutation assemble_8k_plus_3(std::span<const int> seed, int n, const RegionLayout& lay) {
  const int m = (n - 21) / 2;
  std::vector<int> out(static_cast<size_t>(n));
  for (int i = 0; i < 9; ++i) out[static_cast<size_t>(i)] = kOddPrefix9[static_cast<size_t>(i)];
  const int r1 = lay.base(1), r2 = lay.base(2), r3 = lay.base(3), r4 = lay.base(4);
  for (int i = 0; i <= 2 * m; ++i) {
    int v;
    if (i % 4 == 0) {
      v = r3 + i / 4;
    } else if (i % 2 == 1) {
      v = r2 + seed[static_cast<size_t>((i - 1) / 2)];
    } else {
      v = r1 + (i - 2) / 4;
    }
    out[static_cast<size_t>(9 + i)] = v;
  }
  for (int i = 0; i < 11; ++i) {
    out[static_cast<size_t>(n - 11 + i)] = r4 + kOddSuffix11[static_cast<size_t>(i)];
  }
  return Permutation(std::move(out));
}

inline Permutation assemble_even(const Permutation& seed, int n, const EvenPlan& plan) {
  const int k = plan.k;
  std::vector<int> out(static_cast<size_t>(n));
  for (int i = 0; i < 32; ++i) out[static_cast<size_t>(i)] = kEvenPrefix32[static_cast<size_t>(i)];
  const auto& lay = plan.layout;
  for (int i = 0; i <= 2 * k - 2; ++i) {
    int v;
    if (i % 4 == 0) {
      v = lay.base(5) + i / 4;
    } else if (i % 2 == 1) {
      v = lay.base(3) + seed[(i - 1) / 2];
    } else {
      v = lay.base(1) + (i - 2) / 4;
    }
    out[static_cast<size_t>(32 + i)] = v;
  }
  const auto& suffix = kEvenSuffixes[static_cast<size_t>((plan.suffix_len - 7) / 2)];
  const int m_len = 31 + 2 * k;
  for (size_t i = 0; i < suffix.size(); ++i) {
    out[static_cast<size_t>(m_len) + i] = lay.base(suffix[i].region) + suffix[i].offset;
  }
  return Permutation(std::move(out));
}

constexpr int kSeedRetryLimit = 64;

}  // namespace detail

/// Bicrucial permutation of length n = 8k+3 (k >= 3). The middle section
/// doubles a square-free seed of length (n-21)/2 that begins with the
/// pattern (2,1,0); the output is always verified bicrucial before being
/// returned, retrying later seeds in lexicographic order if a seed fails.
inline Permutation build_8k_plus_3(int n) {
  const RegionLayout lay = layout_for_8k_plus_3(n);
  const int m = (n - 21) / 2;
  std::optional<Permutation> result;
  int tried = 0;
  detail::for_each_square_free_lex(m, std::array<int, 3>{2, 1, 0}, [&](std::span<const int> seed) {
    Permutation candidate = detail::assemble_8k_plus_3(seed, n, lay);
    if (is_bicrucial(candidate)) {
      result = std::move(candidate);
      return false;
    }
    return ++tried < detail::kSeedRetryLimit;
  });
  if (!result) throw VerificationFailed("no verified output within the seed retry limit");
  return *result;
}

/// Bicrucial permutation of even length n >= 48. The output is always
/// verified bicrucial before being returned, retrying later seeds if needed.
inline Permutation build_even(int n) {
  const EvenPlan plan = plan_for_even(n);
  std::optional<Permutation> result;
  int tried = 0;
  detail::for_each_square_free_lex((plan.k - 1) / 2, std::nullopt, [&](std::span<const int> half) {
    const Permutation half_seed = Permutation::unchecked(std::vector<int>(half.begin(), half.end()));
    const Permutation seed = detail::assemble_capped_seed(half_seed, plan.k);
    if (!is_square_free(seed)) return true;
    Permutation candidate = detail::assemble_even(seed, n, plan);
    if (is_bicrucial(candidate)) {
      result = std::move(candidate);
      return false;
    }
    return ++tried < detail::kSeedRetryLimit;
  });
  if (!result) throw VerificationFailed("no verified output within the seed retry limit");
  return *result;
}

// ---------------------------------------------------------------------------
// Stored witnesses for the small even lengths
// ---------------------------------------------------------------------------

namespace detail {

// The length-32 witness: the even construction's 32-entry prefix is
// left-crucial but not right-crucial, so a separate witness is stored (found
// by the bicrucial search at length 32 and verified in tests).
inline const std::vector<int> kWitness32{8,  2,  0,  20, 29, 19, 3,  4,  7,  5,  1,
                                         30, 31, 21, 6,  9,  22, 12, 10, 24, 26, 23,
                                         13, 14, 17, 15, 11, 27, 28, 25, 16, 18};

inline const std::map<int, std::vector<int>>& witness_table_raw() {
  static const std::map<int, std::vector<int>> table{
      {32, kWitness32},
      {34, {8,  2,  0,  21, 30, 20, 3,  4,  7,  5,  1,  31, 32, 22, 6,  9,  23,
            12, 10, 25, 27, 24, 13, 14, 18, 15, 11, 28, 29, 26, 17, 19, 33, 16}},
      {36, {27, 33, 35, 22, 21, 26, 32, 31, 28, 30, 34, 19, 12, 20, 29, 25, 11, 18,
            24, 9,  7,  10, 17, 16, 13, 15, 23, 4,  2,  5,  14, 8,  1,  3,  6,  0}},
      {40, {8,  2,  0,  20, 29, 19, 3,  4,  7,  5,  1,  30, 31, 21, 6,  9,  22, 12, 10, 24,
            26, 23, 13, 14, 17, 15, 11, 27, 28, 25, 16, 18, 34, 33, 32, 37, 39, 36, 35, 38}},
      {42, {8,  2,  0,  20, 29, 19, 3,  4,  7,  5,  1,  30, 31, 21, 6,  9,  22, 12, 10, 24, 26,
            23, 13, 14, 17, 15, 11, 27, 28, 25, 16, 18, 34, 33, 32, 39, 41, 38, 36, 37, 40, 35}},
      {44, {8,  2,  0,  20, 29, 19, 3,  4,  7,  5,  1,  30, 31, 21, 6,  9,  22, 12, 10, 24, 26, 23,
            13, 14, 17, 15, 11, 27, 28, 25, 16, 18, 34, 33, 32, 38, 42, 37, 35, 36, 41, 40, 39, 43}},
      {46, {8,  2,  0,  25, 34, 24, 3,  4,  7,  5,  1,  35, 36, 26, 6,  9,  27, 12, 10, 29, 31, 28, 13,
            14, 17, 15, 11, 32, 33, 30, 16, 23, 39, 38, 37, 40, 41, 22, 19, 20, 43, 42, 21, 44, 45, 18}},
  };
  return table;
}

}  // namespace detail

/// Stored bicrucial permutations for the even lengths 32..46 (except the
/// infeasible 38). Every entry is verified bicrucial the first time the
/// table is used.
inline const std::map<int, Permutation>& witness_table() {
  static const std::map<int, Permutation> table = [] {
    std::map<int, Permutation> t;
    for (const auto& [n, vals] : detail::witness_table_raw()) {
      Permutation p(vals);
      if (p.size() != n || !is_bicrucial(p)) {
        throw VerificationFailed("stored witness for length " + std::to_string(n) + " is invalid");
      }
      t.emplace(n, std::move(p));
    }
    return t;
  }();
  return table;
}

/// The stored bicrucial permutation of a small even length in
/// {32, 34, 36, 40, 42, 44, 46}.
inline Permutation witness_small_even(int n) {
  const auto& table = witness_table();
  auto it = table.find(n);
  if (it == table.end()) throw NoWitness("no stored witness for length " + std::to_string(n));
  return it->second;
}

// ---------------------------------------------------------------------------
// Dispatcher
// ---------------------------------------------------------------------------

struct ConstructResult {
  enum class Status { Built, Infeasible, Unsupported };
  Status status = Status::Infeasible;
  std::optional<Permutation> perm;

  bool built() const { return status == Status::Built; }
};

/// First bicrucial permutation of length n in the canonical search order of
/// the prefix-pattern DFS, with square and lower-bound pruning. Absent when
/// the node budget runs out first.
inline std::optional<Permutation> find_bicrucial_by_search(int n, uint64_t node_budget = 0,
                                                           StartPhase phase = StartPhase::Any) {
  detail::EngineOptions opt;
  opt.max_len = n;
  opt.bound_cutoff = n + 1;
  opt.node_budget = node_budget;
  opt.phase = phase;
  std::atomic<bool> stop{false};
  opt.stop = &stop;
  std::optional<Permutation> found;
  auto leaf = [&](std::span<const int> p) {
    if (detail::bicrucial_given_square_free(p)) {
      found = Permutation::unchecked(std::vector<int>(p.begin(), p.end()));
      stop.store(true, std::memory_order_relaxed);
    }
  };
  detail::run_engine(opt, leaf);
  return found;
}

/// Produces a bicrucial permutation of length n, or reports that none exists
/// (Infeasible), or that the length is feasible but outside the supported
/// constructions and the bounded search gave up (Unsupported).
///
/// Dispatch: odd n = 8k+3 with n >= 27 uses the odd-family construction;
/// other feasible odd lengths use a bounded search; even 32..46 come from the
/// stored witness table; even n >= 48 uses the even-family construction.
inline ConstructResult construct_bicrucial(int n, uint64_t search_budget = 400'000'000ULL) {
  if (n < 1) throw InvalidInput("length must be at least 1");
  ConstructResult res;
  if (!exists_bicrucial(n)) {
    res.status = ConstructResult::Status::Infeasible;
    return res;
  }
  if (n % 2 == 1) {
    if (n % 8 == 3 && n >= 27) {
      res.perm = build_8k_plus_3(n);
      res.status = ConstructResult::Status::Built;
      return res;
    }
    auto found = find_bicrucial_by_search(n, search_budget);
    if (found) {
      res.perm = std::move(found);
      res.status = ConstructResult::Status::Built;
    } else {
      res.status = ConstructResult::Status::Unsupported;
    }
    return res;
  }
  res.perm = n >= 48 ? build_even(n) : witness_small_even(n);
  res.status = ConstructResult::Status::Built;
  return res;
}

}  // namespace sqperm
