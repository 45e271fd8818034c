#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace treewalk {

enum class ErrorCode {
  PrecisionExhausted,
  PrimeMismatch,
  DivisionByZero,
  ZeroDenominator,
  InvalidPrime,
  OmegaOperand,
  IndistinguishableAtPrecision,
  BranchOutOfRange,
  RealizationMismatch,
  EmptySupport,
  MalformedSyntax,
  WeightsNotNormalized,
  NonExceptionalityFailed,
  StepBudgetExceeded,
  NonPositiveDrift,
  NonNegativeDrift,
  HorizonTooSmall,
  TruncationTooCoarse,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library is reported through this type; the code is
// the stable part, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace treewalk
