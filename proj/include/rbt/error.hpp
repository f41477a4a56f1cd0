#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rbt {

enum class ErrorCode {
  MalformedTree,
  UnknownBinding,
  InvalidCommand,
  PreconditionViolated,
  NotGraspable,
  OutOfReach,
  GripperOccupied,
  NothingHeld,
  NoContact,
  UnknownObject,
  OutOfBounds,
  InvalidDescriptor,
  UnknownPredicate,
  NoPlanFound,
  DegenerateHistory,
  UnknownScenario,
  MissingData,
  Io,
};

inline constexpr std::string_view to_string(ErrorCode c) noexcept {
  switch (c) {
    case ErrorCode::MalformedTree: return "MalformedTree";
    case ErrorCode::UnknownBinding: return "UnknownBinding";
    case ErrorCode::InvalidCommand: return "InvalidCommand";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NotGraspable: return "NotGraspable";
    case ErrorCode::OutOfReach: return "OutOfReach";
    case ErrorCode::GripperOccupied: return "GripperOccupied";
    case ErrorCode::NothingHeld: return "NothingHeld";
    case ErrorCode::NoContact: return "NoContact";
    case ErrorCode::UnknownObject: return "UnknownObject";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::InvalidDescriptor: return "InvalidDescriptor";
    case ErrorCode::UnknownPredicate: return "UnknownPredicate";
    case ErrorCode::NoPlanFound: return "NoPlanFound";
    case ErrorCode::DegenerateHistory: return "DegenerateHistory";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::MissingData: return "MissingData";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rbt
