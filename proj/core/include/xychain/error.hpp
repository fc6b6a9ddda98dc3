#pragma once

#include <stdexcept>
#include <string>

namespace xychain {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the domain of the operation (q outside (0,1), negative
/// degree, wrong array length, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A denominator Pochhammer factor of a terminating series vanishes.
class DenominatorVanishes : public Error {
 public:
  DenominatorVanishes(int k, const std::string& what)
      : Error(what), k_(k) {}
  /// First summation index whose term would divide by zero.
  int k() const noexcept { return k_; }

 private:
  int k_;
};

/// Shifted q-Racah parameters violate the denominator invariants.
class InvalidShiftedParams : public Error {
 public:
  using Error::Error;
};

/// Coefficients are not finite or a square-root argument is negative.
class InvalidParameterRegime : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class SizeCapExceeded : public Error {
 public:
  using Error::Error;
};

class NoValidParameters : public Error {
 public:
  using Error::Error;
};

}  // namespace xychain
