#include "foels/error.hpp"

namespace foels {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncated: return "Truncated";
    case ErrorCode::kBadDims: return "BadDims";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateClass: return "DuplicateClass";
    case ErrorCode::kPriorOutOfRange: return "PriorOutOfRange";
    case ErrorCode::kUnknownClass: return "UnknownClass";
    case ErrorCode::kEmptyStaticArea: return "EmptyStaticArea";
    case ErrorCode::kDegenerate: return "Degenerate";
    case ErrorCode::kAtFoe: return "AtFoe";
    case ErrorCode::kZeroFlow: return "ZeroFlow";
    case ErrorCode::kInsufficientFlow: return "InsufficientFlow";
    case ErrorCode::kNoConsensus: return "NoConsensus";
    case ErrorCode::kZeroStaticFlow: return "ZeroStaticFlow";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kBehindCamera: return "BehindCamera";
    case ErrorCode::kRotationPresent: return "RotationPresent";
    case ErrorCode::kNoMotion: return "NoMotion";
    case ErrorCode::kEmptyScene: return "EmptyScene";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace foels
