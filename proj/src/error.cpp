// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include "quicktap/error.hpp"

namespace quicktap {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedStream: return "malformed_stream";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kMissingClass: return "missing_class";
    case ErrorCode::kNotConverged: return "not_converged";
    case ErrorCode::kTooFewRows: return "too_few_rows";
    case ErrorCode::kMissingTruth: return "missing_truth";
    case ErrorCode::kInvalidConfig: return "invalid_config";
    case ErrorCode::kProfileMismatch: return "profile_mismatch";
    case ErrorCode::kSchemaVersion: return "schema_version";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kTapSetMismatch: return "tap_set_mismatch";
    case ErrorCode::kZeroVariance: return "zero_variance";
  }
  return "unknown";
}

}  // namespace quicktap
