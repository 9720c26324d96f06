#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace padehankel {

enum class ErrorCode {
  IdenticallyZero,
  LengthTooShort,
  RecurrenceBreakdown,
  UnknownProblem,
  BadParams,
  NotEnoughCoefficients,
  DimensionMismatch,
  Degenerate,
  NoRealRoots,
  NoRootFound,
  SequenceLost,
  TooFewEstimates,
  NoOverlap,
  StepUnderflow,
  SameSideBracket,
  UndecidedAtBracket,
  OutOfScope,
  Usage,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IdenticallyZero: return "IdenticallyZero";
    case ErrorCode::LengthTooShort: return "LengthTooShort";
    case ErrorCode::RecurrenceBreakdown: return "RecurrenceBreakdown";
    case ErrorCode::UnknownProblem: return "UnknownProblem";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::NotEnoughCoefficients: return "NotEnoughCoefficients";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::NoRealRoots: return "NoRealRoots";
    case ErrorCode::NoRootFound: return "NoRootFound";
    case ErrorCode::SequenceLost: return "SequenceLost";
    case ErrorCode::TooFewEstimates: return "TooFewEstimates";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::SameSideBracket: return "SameSideBracket";
    case ErrorCode::UndecidedAtBracket: return "UndecidedAtBracket";
    case ErrorCode::OutOfScope: return "OutOfScope";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace padehankel
