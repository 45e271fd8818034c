#include "treewalk/error.hpp"

namespace treewalk {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::PrimeMismatch: return "PrimeMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::InvalidPrime: return "InvalidPrime";
    case ErrorCode::OmegaOperand: return "OmegaOperand";
    case ErrorCode::IndistinguishableAtPrecision: return "IndistinguishableAtPrecision";
    case ErrorCode::BranchOutOfRange: return "BranchOutOfRange";
    case ErrorCode::RealizationMismatch: return "RealizationMismatch";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::MalformedSyntax: return "MalformedSyntax";
    case ErrorCode::WeightsNotNormalized: return "WeightsNotNormalized";
    case ErrorCode::NonExceptionalityFailed: return "NonExceptionalityFailed";
    case ErrorCode::StepBudgetExceeded: return "StepBudgetExceeded";
    case ErrorCode::NonPositiveDrift: return "NonPositiveDrift";
    case ErrorCode::NonNegativeDrift: return "NonNegativeDrift";
    case ErrorCode::HorizonTooSmall: return "HorizonTooSmall";
    case ErrorCode::TruncationTooCoarse: return "TruncationTooCoarse";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace treewalk
