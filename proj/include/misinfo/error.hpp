#pragma once

#include <stdexcept>
#include <string>

namespace misinfo {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong sizes, non-finite entries, out-of-range parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A covariance that is not symmetric positive-definite, or a reporter
/// problem whose Hessian is singular.
class DegenerateModel : public Error {
 public:
  using Error::Error;
};

/// Multiplier search or rejection sampling did not terminate.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling whose acceptance rate is too low to be practical.
class InfeasibleSampling : public Error {
 public:
  using Error::Error;
};

}  // namespace misinfo
