#pragma once

#include <stdexcept>
#include <string>

namespace chtest {

enum class ErrorCode {
  UnknownOwner,
  DeadSubject,
  DuplicateAdd,
  NotAMethodAddition,
  MalformedDocument,
  UnknownClass,
  UnknownChange,
  EmptyFullSuite,
  InconsistentBase,
  BaselineFailure,
  ParseFailed,
};

// Single exception type for all contract violations; tests match on code().
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

inline const char *errorCodeName(ErrorCode c) {
  switch (c) {
  case ErrorCode::UnknownOwner: return "UnknownOwner";
  case ErrorCode::DeadSubject: return "DeadSubject";
  case ErrorCode::DuplicateAdd: return "DuplicateAdd";
  case ErrorCode::NotAMethodAddition: return "NotAMethodAddition";
  case ErrorCode::MalformedDocument: return "MalformedDocument";
  case ErrorCode::UnknownClass: return "UnknownClass";
  case ErrorCode::UnknownChange: return "UnknownChange";
  case ErrorCode::EmptyFullSuite: return "EmptyFullSuite";
  case ErrorCode::InconsistentBase: return "InconsistentBase";
  case ErrorCode::BaselineFailure: return "BaselineFailure";
  case ErrorCode::ParseFailed: return "ParseFailed";
  }
  return "Unknown";
}

} // namespace chtest
