#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace defobs {

enum class ErrorCode {
  NotSmallExtension,
  BRankUnsupported,
  ResidueNotField,
  FamilyMismatch,
  LevelError,
  NotInB,
  DimensionMismatch,
  NotAComplex,
  LevelMismatch,
  InternalCocycleFailure,
  ObstructionNonzero,
  NotACocycle,
  PresentationUnavailable,
  BoundsExceeded,
  TimeBudgetExceeded,
  NotSemiorthogonal,
  LiftObstructed,
  UniquenessFailure,
  ParseError,
  ValidationError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSmallExtension: return "NotSmallExtension";
    case ErrorCode::BRankUnsupported: return "BRankUnsupported";
    case ErrorCode::ResidueNotField: return "ResidueNotField";
    case ErrorCode::FamilyMismatch: return "FamilyMismatch";
    case ErrorCode::LevelError: return "LevelError";
    case ErrorCode::NotInB: return "NotInB";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotAComplex: return "NotAComplex";
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::InternalCocycleFailure: return "InternalCocycleFailure";
    case ErrorCode::ObstructionNonzero: return "ObstructionNonzero";
    case ErrorCode::NotACocycle: return "NotACocycle";
    case ErrorCode::PresentationUnavailable: return "PresentationUnavailable";
    case ErrorCode::BoundsExceeded: return "BoundsExceeded";
    case ErrorCode::TimeBudgetExceeded: return "TimeBudgetExceeded";
    case ErrorCode::NotSemiorthogonal: return "NotSemiorthogonal";
    case ErrorCode::LiftObstructed: return "LiftObstructed";
    case ErrorCode::UniquenessFailure: return "UniquenessFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace defobs
