#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sqperm/permutation.hpp"
#include "sqperm/squares.hpp"

namespace sqperm {

namespace detail {

// Crucial tests for a permutation already known to be square-free. A new
// square in an extension must use the new entry, so only squares anchored at
// the inserted end are scanned.
inline bool right_crucial_given_square_free(std::span<const int> p) {
  const int n = static_cast<int>(p.size());
  for (int x = 0; x <= n; ++x) {
    if (!right_extension_has_square(p, x)) return false;
  }
  return true;
}

inline bool left_crucial_given_square_free(std::span<const int> p) {
  const int n = static_cast<int>(p.size());
  for (int x = 0; x <= n; ++x) {
    if (!left_extension_has_square(p, x)) return false;
  }
  return true;
}

inline bool bicrucial_given_square_free(std::span<const int> p) {
  return left_crucial_given_square_free(p) && right_crucial_given_square_free(p);
}

}  // namespace detail

/// Square-free and every right-extension contains a square.
/// Non-square-free inputs yield false rather than an error.
inline bool is_right_crucial(const Permutation& p) {
  return is_square_free(p) && detail::right_crucial_given_square_free(p.view());
}

/// Square-free and every left-extension contains a square.
inline bool is_left_crucial(const Permutation& p) {
  return is_square_free(p) && detail::left_crucial_given_square_free(p.view());
}

/// Simultaneously left-crucial and right-crucial.
inline bool is_bicrucial(const Permutation& p) {
  return is_square_free(p) && detail::bicrucial_given_square_free(p.view());
}

/// Diagnostic report for the crucial predicates.
struct CrucialReport {
  enum class Side { Left, Right };

  /// A square-free extension witnessing that a crucial flag is false.
  struct FailingExtension {
    Side side;
    int value = 0;  // the inserted value
    Permutation extended;
    friend bool operator==(const FailingExtension&, const FailingExtension&) = default;
  };

  Permutation subject;
  bool square_free = false;
  bool left_crucial = false;
  bool right_crucial = false;
  std::optional<FailingExtension> failing_extension;

  bool bicrucial() const { return left_crucial && right_crucial; }
};

/// Full report. When the subject is square-free but a crucial flag is false,
/// failing_extension holds the square-free extension with the smallest
/// inserted value on the failing side (left side preferred).
inline CrucialReport analyze(const Permutation& p) {
  CrucialReport r;
  r.subject = p;
  r.square_free = is_square_free(p);
  if (!r.square_free) return r;
  const int n = p.size();
  std::optional<int> left_fail, right_fail;
  for (int x = 0; x <= n && !left_fail; ++x) {
    if (!detail::left_extension_has_square(p.view(), x)) left_fail = x;
  }
  for (int x = 0; x <= n && !right_fail; ++x) {
    if (!detail::right_extension_has_square(p.view(), x)) right_fail = x;
  }
  r.left_crucial = !left_fail.has_value();
  r.right_crucial = !right_fail.has_value();
  if (left_fail) {
    r.failing_extension = CrucialReport::FailingExtension{
        CrucialReport::Side::Left, *left_fail, left_extensions(p)[static_cast<size_t>(*left_fail)]};
  } else if (right_fail) {
    r.failing_extension =
        CrucialReport::FailingExtension{CrucialReport::Side::Right, *right_fail,
                                        right_extensions(p)[static_cast<size_t>(*right_fail)]};
  }
  return r;
}

}  // namespace sqperm
