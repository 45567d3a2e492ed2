#pragma once

#include <stdexcept>
#include <string>

namespace cone_gauge {

/// An argument lies outside the mathematical domain of an operation
/// (a point outside the disc, a vector outside the cone, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition on the inputs does not hold
/// (shape mismatch, violated domination bound, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A consistency check between two computations failed. Indicates a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cone_gauge
