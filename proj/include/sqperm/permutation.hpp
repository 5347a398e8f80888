#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqperm/errors.hpp"

namespace sqperm {

/// A permutation of {0, ..., n-1}, written as the vector of its values.
///
/// Immutable value type. The checked constructor enforces that the entries
/// are exactly {0, ..., n-1}; use `unchecked` only where that already holds.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> entries) : entries_(std::move(entries)) {
    validate(entries_);
  }

  static Permutation unchecked(std::vector<int> entries) {
    Permutation p;
    p.entries_ = std::move(entries);
    return p;
  }

  int size() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }
  int operator[](int i) const { return entries_[static_cast<size_t>(i)]; }
  const std::vector<int>& entries() const { return entries_; }
  std::span<const int> view() const { return entries_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    return std::lexicographical_compare_three_way(a.entries_.begin(), a.entries_.end(),
                                                  b.entries_.begin(), b.entries_.end());
  }

  /// Text form: comma-separated decimal values, no brackets, e.g. "0,6,5,2,4,7,3,1,8".
  std::string str() const {
    std::string s;
    for (size_t i = 0; i < entries_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(entries_[i]);
    }
    return s;
  }

  /// Parses the text form. Rejects anything that is not a permutation of
  /// {0, ..., n-1}. An empty (or all-whitespace) string is the empty permutation.
  static Permutation parse(std::string_view text) {
    std::vector<int> vals;
    size_t pos = 0;
    auto skip_ws = [&] {
      while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    };
    skip_ws();
    while (pos < text.size()) {
      size_t start = pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      if (pos == start) throw InvalidInput("expected a decimal value in permutation text");
      long v = 0;
      for (size_t i = start; i < pos; ++i) {
        v = v * 10 + (text[i] - '0');
        if (v > 1'000'000) throw InvalidInput("permutation entry out of range");
      }
      vals.push_back(static_cast<int>(v));
      skip_ws();
      if (pos < text.size()) {
        if (text[pos] != ',') throw InvalidInput("expected ',' in permutation text");
        ++pos;
        skip_ws();
        if (pos == text.size()) throw InvalidInput("trailing ',' in permutation text");
      }
    }
    return Permutation(std::move(vals));
  }

 private:
  static void validate(const std::vector<int>& v) {
    const int n = static_cast<int>(v.size());
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (int x : v) {
      if (x < 0 || x >= n) throw InvalidInput("entry " + std::to_string(x) + " outside [0, n)");
      if (seen[static_cast<size_t>(x)]) throw InvalidInput("duplicate entry " + std::to_string(x));
      seen[static_cast<size_t>(x)] = 1;
    }
  }

  std::vector<int> entries_;
};

/// The unique permutation order-isomorphic to v (distinct entries required):
/// the i-th smallest entry becomes the value i.
inline Permutation pattern_of(std::span<const int> v) {
  const int n = static_cast<int>(v.size());
  std::vector<int> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
  for (int i = 0; i + 1 < n; ++i) {
    if (v[idx[i]] == v[idx[i + 1]]) throw InvalidInput("pattern_of requires distinct entries");
  }
  std::vector<int> out(static_cast<size_t>(n));
  for (int rank = 0; rank < n; ++rank) out[static_cast<size_t>(idx[rank])] = rank;
  return Permutation::unchecked(std::move(out));
}

inline Permutation pattern_of(const std::vector<int>& v) {
  return pattern_of(std::span<const int>(v));
}

/// True iff a and b have equal length and compare identically position-by-position.
inline bool order_isomorphic(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) return false;
  const int n = static_cast<int>(a.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((a[i] < a[j]) != (b[i] < b[j])) return false;
    }
  }
  return true;
}

/// Order isomorphism after truncating the longer sequence to a prefix of the
/// shorter one's length.
inline bool order_isomorphic_truncated(std::span<const int> a, std::span<const int> b) {
  const size_t s = std::min(a.size(), b.size());
  return order_isomorphic(a.first(s), b.first(s));
}

/// Index reversal: result_i = p_{n-1-i}.
inline Permutation reverse(const Permutation& p) {
  std::vector<int> v(p.entries().rbegin(), p.entries().rend());
  return Permutation::unchecked(std::move(v));
}

/// Value flip: result_i = n - 1 - p_i.
inline Permutation complement(const Permutation& p) {
  const int n = p.size();
  std::vector<int> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = n - 1 - p[i];
  return Permutation::unchecked(std::move(v));
}

inline Permutation reverse_complement(const Permutation& p) { return reverse(complement(p)); }

/// True iff p equals its own reverse-complement (equivalently, its reverse
/// equals its complement): p_{n-1-i} = n-1-p_i for all i.
inline bool reverse_equals_complement(std::span<const int> p) {
  const int n = static_cast<int>(p.size());
  for (int i = 0; i < n; ++i) {
    if (p[static_cast<size_t>(n - 1 - i)] != n - 1 - p[static_cast<size_t>(i)]) return false;
  }
  return true;
}

/// The n+1 right-extensions of p, in increasing order of the appended value x:
/// entries >= x are shifted up by one, then x is appended.
inline std::vector<Permutation> right_extensions(const Permutation& p) {
  const int n = p.size();
  std::vector<Permutation> out;
  out.reserve(static_cast<size_t>(n) + 1);
  for (int x = 0; x <= n; ++x) {
    std::vector<int> v(static_cast<size_t>(n) + 1);
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = p[i] + (p[i] >= x ? 1 : 0);
    v[static_cast<size_t>(n)] = x;
    out.push_back(Permutation::unchecked(std::move(v)));
  }
  return out;
}

/// The n+1 left-extensions of p, in increasing order of the prepended value x.
inline std::vector<Permutation> left_extensions(const Permutation& p) {
  const int n = p.size();
  std::vector<Permutation> out;
  out.reserve(static_cast<size_t>(n) + 1);
  for (int x = 0; x <= n; ++x) {
    std::vector<int> v(static_cast<size_t>(n) + 1);
    v[0] = x;
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) + 1] = p[i] + (p[i] >= x ? 1 : 0);
    out.push_back(Permutation::unchecked(std::move(v)));
  }
  return out;
}

namespace detail {

// Extension scratch with doubled values: existing entries become 2v and the
// inserted value x becomes 2x-1, which sits strictly between 2(x-1) and 2x.
// Relative order matches the renormalized extension, with no shifting pass.
inline void fill_right_extension(std::span<const int> p, int x, std::vector<int>& out) {
  out.resize(p.size() + 1);
  for (size_t i = 0; i < p.size(); ++i) out[i] = 2 * p[i];
  out[p.size()] = 2 * x - 1;
}

inline void fill_left_extension(std::span<const int> p, int x, std::vector<int>& out) {
  out.resize(p.size() + 1);
  out[0] = 2 * x - 1;
  for (size_t i = 0; i < p.size(); ++i) out[i + 1] = 2 * p[i];
}

}  // namespace detail

}  // namespace sqperm
