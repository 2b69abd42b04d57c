#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lagbo {

enum class ErrorCode {
  SeriesTooShort,
  DegenerateRange,
  LagTooLarge,
  SingularRegression,
  DimensionMismatch,
  CholeskyFailure,
  OutOfBounds,
  NonFiniteValue,
  NonFiniteLoss,
  HistoryTooShort,
  PipelineFailed,
  LengthMismatch,
  EmptyInput,
  UnknownReference,
  DomainError,
  InsufficientData,
  ParseError,
  GapError,
  NonMonotoneError,
  InvalidArgument,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lagbo
