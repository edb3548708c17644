#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stillwater {

/// Base class for every error raised by the library. The message always
/// names the contract that was violated.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A multiplier singular at the origin was applied to a field with nonzero mean.
class SingularMode : public Error {
 public:
  using Error::Error;
};

/// A Fourier symbol does not satisfy m(-xi) = conj(m(xi)).
class NonRealSymbol : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class NonPositiveScale : public Error {
 public:
  using Error::Error;
};

class BadSpec : public Error {
 public:
  using Error::Error;
};

/// A free-surface sample left the working range of the forcing data.
class RangeViolation : public Error {
 public:
  using Error::Error;
};

/// The fluid depth 1 + beta + eta dropped to the hard floor.
class DepthViolation : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

/// Raised by iterative solvers; carries the residual history for reporting.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations, std::vector<double> history)
      : Error(what), iterations_(iterations), history_(std::move(history)) {}

  [[nodiscard]] int iterations() const noexcept { return iterations_; }
  [[nodiscard]] const std::vector<double>& history() const noexcept { return history_; }

 private:
  int iterations_;
  std::vector<double> history_;
};

class LinearSolveFailure : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

class NoConvergence : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

}  // namespace stillwater
