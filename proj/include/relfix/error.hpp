#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relfix {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed group, word or automorphism source. Carries a 1-based position.
class ParseError : public Error {
 public:
  ParseError(std::string const& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input that violates a semantic rule (duplicate names, a map
/// that is not an automorphism, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A search hit its configured bound. Never silently approximated.
class CapExceeded : public Error {
 public:
  CapExceeded(std::string const& parameter, std::string const& message)
      : Error(parameter + ": " + message), parameter_(parameter) {}

  std::string const& parameter() const { return parameter_; }

 private:
  std::string parameter_;
};

/// An operation was called outside its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace relfix
