#include "infosample/error.hpp"

namespace infosample {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::DimensionalityTooHigh: return "DimensionalityTooHigh";
    case ErrorKind::WrongDimensionality: return "WrongDimensionality";
    case ErrorKind::MemoryBudgetExceeded: return "MemoryBudgetExceeded";
    case ErrorKind::AxisOutOfRange: return "AxisOutOfRange";
    case ErrorKind::EmptyHistogram: return "EmptyHistogram";
    case ErrorKind::Unachievable: return "Unachievable";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownOperator: return "UnknownOperator";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::EmptyROI: return "EmptyROI";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::Io: return "Io";
    case ErrorKind::MalformedHeader: return "MalformedHeader";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::MalformedHeader:
      return 2;
    case ErrorKind::Internal:
      return 3;
    default:
      return 1;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

SizeMismatchError::SizeMismatchError(std::uint64_t expected, std::uint64_t actual,
                                     const std::string& what)
    : Error(ErrorKind::SizeMismatch, what + " (expected " + std::to_string(expected) +
                                         ", got " + std::to_string(actual) + ")"),
      expected_(expected),
      actual_(actual) {}

NonFiniteValueError::NonFiniteValueError(std::uint64_t index)
    : Error(ErrorKind::NonFiniteValue,
            "non-finite value at linear index " + std::to_string(index)),
      index_(index) {}

SyntaxError::SyntaxError(std::size_t position, const std::string& message)
    : Error(ErrorKind::SyntaxError, message + " at position " + std::to_string(position)),
      position_(position) {}

}  // namespace infosample
