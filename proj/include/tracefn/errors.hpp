#pragma once

#include <stdexcept>
#include <string>

namespace tracefn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (non-PSD matrix, non-positive scalar, unsupported exponent, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The hypothesis im(P) ⊆ im(A) does not hold.
class ImageConditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An iterative method (eigensolver, quadrature) stopped before reaching its
/// tolerance. `residual()` carries the last error indicator.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Eigenvalue branches could not be matched unambiguously between grid points.
class TrackingError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace tracefn
