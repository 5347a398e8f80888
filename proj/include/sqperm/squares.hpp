#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sqperm/errors.hpp"
#include "sqperm/permutation.hpp"

namespace sqperm {

namespace detail {

// Are the adjacent halves p[k, k+l) and p[k+l, k+2l) order-isomorphic?
inline bool halves_isomorphic(std::span<const int> p, int k, int l) {
  for (int i = 0; i < l; ++i) {
    for (int j = i + 1; j < l; ++j) {
      if ((p[static_cast<size_t>(k + i)] < p[static_cast<size_t>(k + j)]) !=
          (p[static_cast<size_t>(k + l + i)] < p[static_cast<size_t>(k + l + j)])) {
        return false;
      }
    }
  }
  return true;
}

inline bool step_up(std::span<const int> p, int i) {
  return p[static_cast<size_t>(i)] < p[static_cast<size_t>(i + 1)];
}

inline bool uudd(std::span<const int> p) {
  const int n = static_cast<int>(p.size());
  for (int i = 0; i + 3 < n; ++i) {
    if (step_up(p, i) == step_up(p, i + 2)) return false;
  }
  return true;
}

// Full scan for the first square, smallest start k then smallest half-length l.
// In a permutation satisfying the up-up-down-down condition a square is of
// length 4 or a multiple of 8, so the scan restricts l to 2 and multiples of 4
// in that case; otherwise every l >= 2 is tried.
inline std::optional<std::pair<int, int>> find_square_scan(std::span<const int> p) {
  const int n = static_cast<int>(p.size());
  if (n < 4) return std::nullopt;
  const bool is_uudd = uudd(p);
  for (int k = 0; k + 4 <= n; ++k) {
    if (is_uudd) {
      if (halves_isomorphic(p, k, 2)) return std::make_pair(k, 2);
      for (int l = 4; k + 2 * l <= n; l += 4) {
        if (halves_isomorphic(p, k, l)) return std::make_pair(k, l);
      }
    } else {
      for (int l = 2; k + 2 * l <= n; ++l) {
        if (halves_isomorphic(p, k, l)) return std::make_pair(k, l);
      }
    }
  }
  return std::nullopt;
}

inline bool square_free(std::span<const int> p) { return !find_square_scan(p).has_value(); }

// Does p contain a square ending at its last entry? Valid only when the
// prefix p[0, n-1) is square-free: any square then ends at the last entry,
// and if the tail does not violate the up-up-down-down condition the whole
// permutation satisfies it, forcing half-lengths 2, 4, 8, 12, ...
inline bool square_at_back(std::span<const int> p) {
  const int n = static_cast<int>(p.size());
  if (n < 4) return false;
  if (step_up(p, n - 4) == step_up(p, n - 2)) return true;
  for (int l = 4; 2 * l <= n; l += 4) {
    if (halves_isomorphic(p, n - 2 * l, l)) return true;
  }
  return false;
}

// Mirror of square_at_back for squares starting at the first entry.
inline bool square_at_front(std::span<const int> p) {
  const int n = static_cast<int>(p.size());
  if (n < 4) return false;
  if (step_up(p, 0) == step_up(p, 2)) return true;
  for (int l = 4; 2 * l <= n; l += 4) {
    if (halves_isomorphic(p, 0, l)) return true;
  }
  return false;
}

// Does appending x to square-free p create a square?
inline bool right_extension_has_square(std::span<const int> p, int x) {
  thread_local std::vector<int> scratch;
  fill_right_extension(p, x, scratch);
  return square_at_back(scratch);
}

// Does prepending x to square-free p create a square?
inline bool left_extension_has_square(std::span<const int> p, int x) {
  thread_local std::vector<int> scratch;
  fill_left_extension(p, x, scratch);
  return square_at_front(scratch);
}

}  // namespace detail

/// A square factor: the halves p[start, start+half_length) and
/// p[start+half_length, start+2*half_length) are order-isomorphic.
struct SquareLocation {
  int start = 0;
  int half_length = 0;

  SquareLocation(const Permutation& host, int k, int l) : start(k), half_length(l) {
    if (l < 2 || k < 0 || k + 2 * l > host.size()) {
      throw InvalidInput("square location out of bounds");
    }
    if (!detail::halves_isomorphic(host.view(), k, l)) {
      throw InvalidInput("factor halves are not order-isomorphic");
    }
  }

  int length() const { return 2 * half_length; }
  friend bool operator==(const SquareLocation&, const SquareLocation&) = default;
};

/// First square in p, smallest start then smallest half-length; absent iff
/// p is square-free.
inline std::optional<SquareLocation> find_square(const Permutation& p) {
  auto hit = detail::find_square_scan(p.view());
  if (!hit) return std::nullopt;
  return SquareLocation(p, hit->first, hit->second);
}

/// No square of length >= 4. Always true for lengths 0..3.
inline bool is_square_free(const Permutation& p) { return detail::square_free(p.view()); }

/// The up-up-down-down condition: for every i, p goes up from i to i+1 iff it
/// goes down from i+2 to i+3. Vacuously true for n <= 3. Equivalent to
/// containing no square of length 4.
inline bool satisfies_uudd(const Permutation& p) { return detail::uudd(p.view()); }

enum class EntryCategory { High, Medium, Low };

/// Classifies entry i of a permutation satisfying the up-up-down-down
/// condition: High between an up-step and a down-step, Low between a
/// down-step and an up-step, Medium otherwise. At the boundaries the missing
/// step is supplied by extending the 4-periodic up/down phase one step past
/// the end. For n = 2 the phase is ambiguous; the smaller phase is used.
inline EntryCategory entry_category(const Permutation& p, int i) {
  const int n = p.size();
  if (i < 0 || i >= n) throw InvalidInput("entry index out of range");
  if (!satisfies_uudd(p)) throw NotUudd("entry_category requires the up-up-down-down condition");
  if (n == 1) return EntryCategory::Medium;
  auto sp = p.view();
  // Fit the phase: step j goes up iff (j + phase) mod 4 is 0 or 1.
  int phase = -1;
  for (int ph = 0; ph < 4 && phase < 0; ++ph) {
    bool ok = true;
    for (int j = 0; j + 1 < n && ok; ++j) {
      bool up = ((j + ph) % 4) <= 1;
      if (up != detail::step_up(sp, j)) ok = false;
    }
    if (ok) phase = ph;
  }
  if (phase < 0) throw NotUudd("no consistent up/down phase");  // unreachable for uudd input
  auto up_at = [&](int j) { return (((j + phase) % 4) + 4) % 4 <= 1; };
  const bool in_up = (i == 0) ? up_at(-1) : detail::step_up(sp, i - 1);
  const bool out_up = (i == n - 1) ? up_at(n - 1) : detail::step_up(sp, i);
  if (in_up && !out_up) return EntryCategory::High;
  if (!in_up && out_up) return EntryCategory::Low;
  return EntryCategory::Medium;
}

/// First factor of k consecutive pairwise order-isomorphic blocks of length
/// l >= 2, as (start, l); smallest start then smallest l. k = 2 agrees with
/// find_square.
inline std::optional<std::pair<int, int>> find_kth_power(const Permutation& p, int k) {
  if (k < 2) throw InvalidInput("power index must be at least 2");
  const int n = p.size();
  auto sp = p.view();
  for (int s = 0; s + 2 * k <= n; ++s) {
    for (int l = 2; s + k * l <= n; ++l) {
      bool all = true;
      for (int b = 0; b + 1 < k && all; ++b) {
        if (!detail::halves_isomorphic(sp, s + b * l, l)) all = false;
      }
      if (all) return std::make_pair(s, l);
    }
  }
  return std::nullopt;
}

}  // namespace sqperm
