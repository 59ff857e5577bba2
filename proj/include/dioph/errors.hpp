#ifndef DIOPH_ERRORS_HPP
#define DIOPH_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dioph {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside an operation's mathematical domain (ln 0, q = 0, singular kernel argument, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested or available precision cannot support the operation.
class PrecisionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An internal cross-check failed. Always signals an arithmetic bug, never bad input.
class ComputationError : public Error {
 public:
  using Error::Error;
};

/// Malformed fixture, cache document or annotation file.
class ParseError : public DomainError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DomainError(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dioph

#endif  // DIOPH_ERRORS_HPP
