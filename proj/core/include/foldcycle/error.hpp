#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace foldcycle {

enum class ErrorCode {
  // input errors
  InvalidArgument,
  DuplicateTerm,
  DegreeOverflow,
  SingularX,
  DegenerateContact,
  NotMonodromic,
  InvalidLambda,
  WrongSign,
  ScaleSeparationViolated,
  // numerical failures
  DivisionResidual,
  IllConditioned,
  NoReturn,
  StepFailure,
  NotInWindow,
  NonHyperbolic,
  Inconclusive,
  // verification
  VerificationMismatch,
};

enum class ErrorCategory { Input, Numerical, Verification };

constexpr ErrorCategory category(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionResidual:
    case ErrorCode::IllConditioned:
    case ErrorCode::NoReturn:
    case ErrorCode::StepFailure:
    case ErrorCode::NotInWindow:
    case ErrorCode::NonHyperbolic:
    case ErrorCode::Inconclusive:
      return ErrorCategory::Numerical;
    case ErrorCode::VerificationMismatch:
      return ErrorCategory::Verification;
    default:
      return ErrorCategory::Input;
  }
}

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace foldcycle
