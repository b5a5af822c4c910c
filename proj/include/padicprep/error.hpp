#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace padicprep {

// Stable machine-readable error codes. The CLI reports these verbatim, so
// the spelling of each name is part of the external interface.
enum class ErrorCode {
  DivisionByZero,
  ContextMismatch,
  PrecisionExhausted,
  ConvergenceViolation,
  CoordinateMismatch,
  NotAUnit,
  SubstitutionDiverges,
  NotRegular,
  TruncationTooSmall,
  MembershipUndecidable,
  NotEigenPrincipal,
  NotLinearizable,
  ExactnessRequired,
  NoAlignment,
  MaximalIdeal,
  ZeroIdeal,
  ComponentOracleRequired,
  PreconditionUnverified,
  InvalidInput,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ContextMismatch: return "ContextMismatch";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::ConvergenceViolation: return "ConvergenceViolation";
    case ErrorCode::CoordinateMismatch: return "CoordinateMismatch";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::SubstitutionDiverges: return "SubstitutionDiverges";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::MembershipUndecidable: return "MembershipUndecidable";
    case ErrorCode::NotEigenPrincipal: return "NotEigenPrincipal";
    case ErrorCode::NotLinearizable: return "NotLinearizable";
    case ErrorCode::ExactnessRequired: return "ExactnessRequired";
    case ErrorCode::NoAlignment: return "NoAlignment";
    case ErrorCode::MaximalIdeal: return "MaximalIdeal";
    case ErrorCode::ZeroIdeal: return "ZeroIdeal";
    case ErrorCode::ComponentOracleRequired: return "ComponentOracleRequired";
    case ErrorCode::PreconditionUnverified: return "PreconditionUnverified";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

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

}  // namespace padicprep
