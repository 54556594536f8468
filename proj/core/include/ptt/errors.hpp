#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ptt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedInstance : public Error {
 public:
  using Error::Error;
};

class BoundInversion : public Error {
 public:
  using Error::Error;
};

class MissingEvent : public Error {
 public:
  using Error::Error;
};

/// An instance invariant does not hold. `invariant()` names the rule.
class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, const std::string& detail)
      : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("parse error at line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class OutOfBoundsGene : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class SpaceTooLarge : public Error {
 public:
  explicit SpaceTooLarge(double size)
      : Error("search space too large: " + std::to_string(size) + " genotypes"),
        size_(size) {}
  double size() const noexcept { return size_; }

 private:
  double size_;
};

class GenerationInfeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace ptt
