#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geiringer {

/// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed population, schema, op, matrix or payoff text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A value violates a domain invariant (duplicate state label, empty rollout, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Bad parameters to an operation (index out of range, m < 1, mismatched distribution, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not reach the requested accuracy.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Orbit enumeration outgrew its cap.
class CapExceeded : public Error {
 public:
  CapExceeded(std::size_t cap, std::size_t frontier)
      : Error("orbit exceeds cap of " + std::to_string(cap) + " populations (frontier size " +
              std::to_string(frontier) + ")"),
        cap_(cap),
        frontier_(frontier) {}

  std::size_t cap() const noexcept { return cap_; }
  std::size_t frontier() const noexcept { return frontier_; }

 private:
  std::size_t cap_;
  std::size_t frontier_;
};

}  // namespace geiringer
