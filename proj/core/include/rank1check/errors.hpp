#pragma once

#include <stdexcept>
#include <string>

namespace rank1check {

/// Two operands disagree on shape, rank or cube mask.
class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exhaustive oracle was asked to enumerate more than its budget allows.
/// Callers are expected to fall back to Monte-Carlo estimation.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (tensor files, DP files, sweep configs).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rank1check
