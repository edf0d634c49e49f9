// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace quicktap {

enum class ErrorCode {
  kMalformedStream,
  kEmptyInput,
  kDimensionMismatch,
  kMissingClass,
  kNotConverged,
  kTooFewRows,
  kMissingTruth,
  kInvalidConfig,
  kProfileMismatch,
  kSchemaVersion,
  kParse,
  kValidation,
  kIo,
  kTapSetMismatch,
  kZeroVariance,
};

/// Stable snake_case name used in machine-readable error lines.
std::string_view error_code_name(ErrorCode code);

/// Every failure in the library surfaces as an Error. `location` carries the
/// offending sample index or 1-based file line when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> location = std::nullopt)
      : std::runtime_error(message), code_(code), location_(location) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> location() const noexcept { return location_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> location_;
};

/// Raised by the L1 solver when max_iter iterations elapse before the
/// optimality gap drops below tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double gap, int iterations)
      : Error(ErrorCode::kNotConverged, message), gap_(gap), iterations_(iterations) {}

  double gap() const noexcept { return gap_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double gap_;
  int iterations_;
};

}  // namespace quicktap
