#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rso {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument's numeric range was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::ptrdiff_t index = -1)
      : Error(what), index_(index) {}
  /// Offending index (leading minor, stuck eigenvalue), or -1.
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  std::ptrdiff_t index_;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class ComplexityError : public Error {
 public:
  using Error::Error;
};

/// A finite truncation was too small to certify the requested accuracy.
class RadiusError : public Error {
 public:
  RadiusError(const std::string& what, long long required)
      : Error(what), required_(required) {}
  long long required() const noexcept { return required_; }

 private:
  long long required_;
};

}  // namespace rso
