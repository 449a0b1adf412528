#pragma once

#include <stdexcept>

namespace solact {

/// Rejected input: parameter out of its admissible range, malformed config,
/// precondition violation. Maps to CLI exit code 1.
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that started from valid inputs failed to converge or blew
/// up (quadrature budget exhausted, separatrix not reconnecting, unstable
/// PDE run). Maps to CLI exit code 2.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace solact
