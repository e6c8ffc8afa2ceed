#pragma once

#include <stdexcept>
#include <string>

namespace magnomech {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mismatched or unsupported matrix/vector dimensions.
struct DimensionError : Error {
  using Error::Error;
};

/// Linear system is singular to working precision.
struct SingularMatrixError : Error {
  SingularMatrixError(const std::string& msg, double pivot_magnitude)
      : Error(msg), pivot(pivot_magnitude) {}
  double pivot;
};

/// Iterative eigenvalue computation did not converge within the sweep budget.
struct ConvergenceError : Error {
  using Error::Error;
};

/// Drift matrix has no steady state (vectorized Lyapunov operator singular,
/// or a caller required stability that does not hold).
struct InstabilityError : Error {
  InstabilityError(const std::string& msg, double max_real)
      : Error(msg), max_real_part(max_real) {}
  explicit InstabilityError(const std::string& msg) : Error(msg), max_real_part(0.0) {}
  double max_real_part;
};

/// Scalar input outside its physical domain.
struct DomainError : Error {
  using Error::Error;
};

/// Mean-field denominator vanished (resonant / degenerate parameter set).
struct DegenerateParametersError : Error {
  using Error::Error;
};

/// Operation needs a coupling mode (or data) the parameter set does not carry.
struct NotApplicableError : Error {
  using Error::Error;
};

/// Covariance matrix violates the bona fide Gaussian-state conditions.
struct PhysicalityError : Error {
  using Error::Error;
};

/// Eigenvalue pairing failed beyond tolerance (symplectic or Hermitian doubling).
struct NumericalDegeneracyError : Error {
  using Error::Error;
};

/// Optimization found no admissible point in the requested range.
struct EmptyResultError : Error {
  using Error::Error;
};

/// Configuration file or flag violates the documented schema.
struct ConfigError : Error {
  using Error::Error;
};

/// Filesystem write failed.
struct IoError : Error {
  using Error::Error;
};

}  // namespace magnomech
