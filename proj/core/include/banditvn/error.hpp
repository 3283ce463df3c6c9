#pragma once

#include <stdexcept>
#include <string>

namespace banditvn {

// Root of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user configuration (bad dimension, delta outside (0,1), lambda0 too small, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A caller violated an operation's precondition (non-unit action, zero weight, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Numerical failure inside a kernel. `residual` carries the quantity that failed.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class NotPositiveDefinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Internal invariant broken (e.g. stale eigendecomposition used to build a batch).
class InvariantError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace banditvn
