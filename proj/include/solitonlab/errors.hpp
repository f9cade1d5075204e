#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace solitonlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument: dimension or order out of range, unknown family, missing parameter.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Evaluation left the domain of an operation (log of a non-positive value, division by zero, ...).
class DomainError : public Error {
 public:
  DomainError(std::string operation, const std::string& detail)
      : Error(operation + ": " + detail), operation_(std::move(operation)) {}

  const std::string& operation() const noexcept { return operation_; }

 private:
  std::string operation_;
};

/// Syntax error in an expression. `offset()` is the 1-based character position.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& detail)
      : Error("at offset " + std::to_string(offset) + ": " + detail),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Metric determinant is below the degeneracy threshold at the evaluated point.
class SingularMetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace solitonlab
