#include "fairlens/error.hpp"

namespace fairlens {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kCohortTooSmall: return "cohort too small";
    case ErrorCode::kMalformedInput: return "malformed input";
    case ErrorCode::kUnexpectedEnd: return "unexpected end of stream";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kUndefinedScore: return "undefined score";
    case ErrorCode::kEmptyPartition: return "empty partition";
    case ErrorCode::kUnresolvableTarget: return "unresolvable target";
    case ErrorCode::kIo: return "i/o failure";
    case ErrorCode::kMissingPrerequisite: return "missing prerequisite";
  }
  return "unknown";
}

}  // namespace fairlens
