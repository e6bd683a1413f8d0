#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairlens {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kCohortTooSmall,
  kMalformedInput,
  kUnexpectedEnd,
  kShapeMismatch,
  kUnsupported,
  kUndefinedScore,
  kEmptyPartition,
  kUnresolvableTarget,
  kIo,
  kMissingPrerequisite,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; the code distinguishes failure
// classes so callers (and the CLI) can react without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fairlens
