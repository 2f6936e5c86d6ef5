#pragma once

#include <stdexcept>
#include <string>

namespace ringhop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (JSON syntax, wrong value types).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input parsed but breaks an invariant. `field()` names the offending path.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// No transmission configuration closes a required link.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A search-size guard was exceeded and not overridden.
class GuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace ringhop
