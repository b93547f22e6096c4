#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace circuitrand {

enum class ErrorCode {
  InvalidArgument,
  NonSquare,
  Singular,
  DimensionMismatch,
  JNotInColumnSpace,
  NotInKernel,
  NotARandomisationVector,
  InvalidSystem,
  TooLarge,
  OutOfBudget,
  NotBalanced,
  RankDeficient,
  Parse,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::JNotInColumnSpace: return "JNotInColumnSpace";
    case ErrorCode::NotInKernel: return "NotInKernel";
    case ErrorCode::NotARandomisationVector: return "NotARandomisationVector";
    case ErrorCode::InvalidSystem: return "InvalidSystem";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::OutOfBudget: return "OutOfBudget";
    case ErrorCode::NotBalanced: return "NotBalanced";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::Parse: return "Parse";
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

}  // namespace circuitrand
