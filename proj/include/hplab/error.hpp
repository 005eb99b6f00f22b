#pragma once

#include <stdexcept>
#include <string>

namespace hplab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: malformed configuration, parameters outside the
/// admissible class, bad expression text.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Expression syntax error; `position` is the 1-based character column.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : ValidationError(what + " at offset " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation requested outside the domain of an object (on a cut, on a
/// pole, outside the sheet-2 annulus, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: certificate not met after precision escalation,
/// iteration budget exhausted, singular systems.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace hplab
