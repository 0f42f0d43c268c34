#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace foels {

enum class ErrorCode {
  kBadMagic,
  kTruncated,
  kBadDims,
  kParseError,
  kDuplicateClass,
  kPriorOutOfRange,
  kUnknownClass,
  kEmptyStaticArea,
  kDegenerate,
  kAtFoe,
  kZeroFlow,
  kInsufficientFlow,
  kNoConsensus,
  kZeroStaticFlow,
  kDimensionMismatch,
  kBehindCamera,
  kRotationPresent,
  kNoMotion,
  kEmptyScene,
  kEmptyDataset,
  kFileNotFound,
  kIoError,
  kInvalidArgument,
  kInvariantViolation,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the
/// message adds context (offending id, file name, line number).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace foels
