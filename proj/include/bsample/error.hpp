#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bsample {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or model parameters; detected before any simulation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A scale estimate is zero, so studentized quantities are undefined.
class DegenerateScaleError : public Error {
 public:
  explicit DegenerateScaleError(const std::string& what, std::ptrdiff_t index = -1)
      : Error(what), index_(index) {}

  // 1-based window index that produced the zero scale, or -1 when not tied to a window.
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  std::ptrdiff_t index_;
};

// Not enough observations (past block or observed window) for the request.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// A configured memory/length cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Requested case lies outside what the method supports (e.g. r >= 3, boundary p(2b-1)=1).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Numerical tolerance could not be met; carries the best estimate reached.
class ToleranceError : public Error {
 public:
  ToleranceError(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_(best_estimate), err_(error_estimate) {}

  double best_estimate() const noexcept { return best_; }
  double error_estimate() const noexcept { return err_; }

 private:
  double best_;
  double err_;
};

}  // namespace bsample
