#include "mover/error.hpp"

namespace mover {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyProject: return "EmptyProject";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MethodNotInClass: return "MethodNotInClass";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::UnknownMethod: return "UnknownMethod";
    case ErrorCode::EmptyContent: return "EmptyContent";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::PlanConflict: return "PlanConflict";
    case ErrorCode::StaleIndex: return "StaleIndex";
    case ErrorCode::ReparseFailed: return "ReparseFailed";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::MissingRun: return "MissingRun";
    case ErrorCode::InsufficientCandidates: return "InsufficientCandidates";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace mover
