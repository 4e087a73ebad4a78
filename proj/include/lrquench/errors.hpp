#pragma once

#include <stdexcept>
#include <string>

namespace lrq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates the precondition of an operation (CLI exit code 2).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: overflow, NaN, non-convergence (CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// No positive root of the gap equation: the initial state would carry a
/// macroscopically occupied k = 0 mode.
class OrderedPhaseError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// The requested (mu0, epsilon) pair cannot be realised with occupation
/// factors >= 1.
class UnreachableError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Classical energy is positive: the effective-mass motion is unbounded.
class NonPeriodicError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidMonodromy : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotPositiveDefinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double error_estimate)
      : NumericalError(what), error_estimate_(error_estimate) {}
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

}  // namespace lrq
