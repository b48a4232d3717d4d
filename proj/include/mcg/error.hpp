#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcg {

// Base of everything the library throws on a violated precondition or a
// malformed input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

// A configured resource bound (coset budget, ball size, closure size) was hit
// before the computation finished. Never a statement about the answer.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class InfiniteIndex : public Error {
 public:
  using Error::Error;
};

// A computation could not certify its answer (for example homogenization did
// not detect eventual linearity within the cap).
class Inconclusive : public Error {
 public:
  using Error::Error;
};

}  // namespace mcg
