#pragma once

#include <stdexcept>
#include <string>

namespace weakvel {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain where an operation is defined,
/// e.g. a post-selection angle of zero in a division.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The data carries no usable information (empty sample, zero counts).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A caller-side contract was violated (e.g. an unconverged fit was passed on).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid configuration. `line` is 0 when the problem is not
/// tied to a specific line of the document.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0, std::string field = {})
      : Error(what), line_(line), field_(std::move(field)) {}

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

/// A numerical fit failed to converge where the caller needed a result.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace weakvel
