#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace povmshadow {

enum class ErrorCode {
  NotHermitian,
  NotPSD,
  BadTrace,
  NotEvent,
  NotPovm,
  DimensionMismatch,
  LengthMismatch,
  ConvergenceFailure,
  ParameterOutOfRange,
  EmptyInstance,
  IndexOutOfRange,
  FeedbackViolation,
  BudgetExhausted,
  ValueLengthMismatch,
  OperatorMismatch,
  TooLarge,
  BadDimensions,
  BadString,
  RetriesExhausted,
  UnknownKey,
  OutOfRange,
  MissingRequired,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (and tests) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace povmshadow
