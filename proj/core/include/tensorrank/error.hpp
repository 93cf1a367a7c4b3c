#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tensorrank {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition or invariant. The CLI maps the
/// whole family (including the parse errors below) to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IndexError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Malformed input text. `row()` is the 1-based line number in the source
/// (the header is line 1), or 0 when no line applies.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t row)
      : ValidationError(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class DuplicateError : public ParseError {
 public:
  using ParseError::ParseError;
};

class CompletenessError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A computation produced a non-finite intermediate.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace tensorrank
