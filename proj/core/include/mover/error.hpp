#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mover {

enum class ErrorCode {
  EmptyProject,
  IoError,
  ParseError,
  MethodNotInClass,
  UnknownClass,
  UnknownMethod,
  EmptyContent,
  ProviderUnavailable,
  DimensionMismatch,
  ZeroVector,
  MalformedResponse,
  PlanConflict,
  StaleIndex,
  ReparseFailed,
  Infeasible,
  MissingRun,
  InsufficientCandidates,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure the engine reports. The code is the
/// stable, machine-readable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mover
