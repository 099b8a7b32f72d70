#include "povmshadow/error.hpp"

namespace povmshadow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::BadTrace: return "BadTrace";
    case ErrorCode::NotEvent: return "NotEvent";
    case ErrorCode::NotPovm: return "NotPovm";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::EmptyInstance: return "EmptyInstance";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::FeedbackViolation: return "FeedbackViolation";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::ValueLengthMismatch: return "ValueLengthMismatch";
    case ErrorCode::OperatorMismatch: return "OperatorMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BadDimensions: return "BadDimensions";
    case ErrorCode::BadString: return "BadString";
    case ErrorCode::RetriesExhausted: return "RetriesExhausted";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::MissingRequired: return "MissingRequired";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace povmshadow
