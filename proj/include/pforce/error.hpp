#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pforce {

enum class ErrorCode {
  OutOfUniverse,
  DisjointnessViolated,
  BNotBelow,
  EmptyOperand,
  EqualSup,
  AlphaNotInDomain,
  BNotBelowAlpha,
  NotSubset,
  DomainMismatch,
  AlreadyPresent,
  PreconditionViolated,
  TooLarge,
  NotGoodTwins,
  HypothesisViolated,
  GoalUnsatisfiable,
  DuplicatePoints,
  AmbientMismatch,
  StuckNoFreshPoint,
  ParseError,
  IoError,
  UnknownSuite,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfUniverse: return "OutOfUniverse";
    case ErrorCode::DisjointnessViolated: return "DisjointnessViolated";
    case ErrorCode::BNotBelow: return "BNotBelow";
    case ErrorCode::EmptyOperand: return "EmptyOperand";
    case ErrorCode::EqualSup: return "EqualSup";
    case ErrorCode::AlphaNotInDomain: return "AlphaNotInDomain";
    case ErrorCode::BNotBelowAlpha: return "BNotBelowAlpha";
    case ErrorCode::NotSubset: return "NotSubset";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::AlreadyPresent: return "AlreadyPresent";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotGoodTwins: return "NotGoodTwins";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::GoalUnsatisfiable: return "GoalUnsatisfiable";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::StuckNoFreshPoint: return "StuckNoFreshPoint";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
  }
  return "Unknown";
}

/// The single exception type thrown by the library; code() identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pforce
