#pragma once

#include <stdexcept>
#include <string>

namespace sqperm {

/// Input violates a documented precondition (duplicates, malformed text, ...).
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operation requires the up-up-down-down condition and the input lacks it.
struct NotUudd : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operation requires a square-free input.
struct NotSquareFree : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Length outside the range a generator supports.
struct BadLength : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// No stored witness for the requested length.
struct NoWitness : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// No object with the requested properties exists.
struct Unsatisfiable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Brute-force cap exceeded.
struct CapExceeded : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A generated object failed its mandatory self-check; indicates a bug.
struct VerificationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sqperm
