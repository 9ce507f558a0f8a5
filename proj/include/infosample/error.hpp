#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace infosample {

enum class ErrorKind {
  // validation
  InvalidArgument,
  InvalidSpec,
  SizeMismatch,
  NonFiniteValue,
  UnknownVariable,
  DimensionalityTooHigh,
  WrongDimensionality,
  MemoryBudgetExceeded,
  AxisOutOfRange,
  EmptyHistogram,
  Unachievable,
  SyntaxError,
  UnknownOperator,
  GridMismatch,
  DimensionMismatch,
  TooSmall,
  IndexOutOfRange,
  ZeroVariance,
  EmptyROI,
  SchemaError,
  // io
  Io,
  MalformedHeader,
  // internal
  Internal,
};

const char* to_string(ErrorKind kind);

/// Process exit code for an error kind: 1 validation, 2 I/O, 3 internal.
int exit_code_for(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SizeMismatchError : public Error {
 public:
  SizeMismatchError(std::uint64_t expected, std::uint64_t actual, const std::string& what);
  std::uint64_t expected() const noexcept { return expected_; }
  std::uint64_t actual() const noexcept { return actual_; }

 private:
  std::uint64_t expected_;
  std::uint64_t actual_;
};

class NonFiniteValueError : public Error {
 public:
  explicit NonFiniteValueError(std::uint64_t index);
  std::uint64_t index() const noexcept { return index_; }

 private:
  std::uint64_t index_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace infosample
