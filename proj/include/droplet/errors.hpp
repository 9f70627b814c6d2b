#pragma once

#include <stdexcept>
#include <string>

namespace droplet {

/// Raised when an operation's input violates its documented precondition
/// (invalid spec, unresolved grid, droplet beyond the isoperimetric crossover).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative solver cannot reach its target.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace droplet
