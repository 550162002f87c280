#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation too close to a genuine singularity (e.g. the critical point).
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A circuit operating point where the SQUID inductance diverges.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thresholds were requested for parameters without a bistable window.
class NoBistabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integration step too large for the explicit relaxation scheme.
class StepSizeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Unexpected numerical failure (a bracketing scan found nothing, etc.).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cqed
