// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quicktap/tap_stream.hpp"

namespace quicktap {

enum class DeviceProfile { kLaptop, kSmartphone };

std::string_view profile_name(DeviceProfile profile);
std::optional<DeviceProfile> parse_profile(std::string_view name);

/// Ordered feature set for a device. Laptop touchpads use timing, contact,
/// motion, location and power features; smartphones use only completion time
/// and contact size, since on-screen locations follow the UI layout.
struct FeatureProfile {
  DeviceProfile device = DeviceProfile::kLaptop;
  std::vector<std::string> feature_names;

  static FeatureProfile for_device(DeviceProfile device);
  std::size_t size() const { return feature_names.size(); }

  bool operator==(const FeatureProfile&) const = default;
};

struct FeatureVector {
  std::vector<double> values;
  int tap_id = 0;

  bool operator==(const FeatureVector&) const = default;
};

/// Feature vector for one tap.
///
/// Completion time is in seconds. Displacement is the signed up-minus-down
/// offset per axis; velocity is displacement over completion time, defined
/// as 0 for zero-length taps. Power is 0 on AC and 1 on battery (unknown
/// counts as AC).
FeatureVector extract(const TapRecord& tap, const FeatureProfile& profile);

/// Per-column standardization with population standard deviation. Columns
/// with zero spread map every value to 0.
struct Scaler {
  std::vector<double> means;
  std::vector<double> stds;

  std::size_t size() const { return means.size(); }
  bool operator==(const Scaler&) const = default;
};

/// Throws Error(kEmptyInput) for no rows, kDimensionMismatch for ragged rows.
Scaler standardize_fit(std::span<const FeatureVector> rows);

/// Throws Error(kDimensionMismatch) when fv and scaler disagree in length.
FeatureVector standardize_apply(const Scaler& scaler, const FeatureVector& fv);

/// In-place variant used on hot paths; same contract as standardize_apply.
void standardize_into(const Scaler& scaler, std::span<const double> raw, std::span<double> out);

}  // namespace quicktap
