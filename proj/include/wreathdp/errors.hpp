#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wreathdp {

/// Misuse of the API: mismatched ranks, group specs, bad options.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called on inputs outside its domain
/// (e.g. decomposing a polynomial that is not in the requested ideal power).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed text input. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace wreathdp
