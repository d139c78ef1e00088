#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mwb {

// Root of the library's exception hierarchy. Everything thrown on purpose
// derives from this; anything else escaping the library is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Textual input could not be parsed (thread DSL, machine files, state
// literals, transformation tables). Carries a 1-based position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// An exhaustive sweep (region computation, tabulation, membership check,
// induced-transformation extraction) would exceed the caller's state cap.
class StateSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace mwb
