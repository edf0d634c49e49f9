// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include "quicktap/features.hpp"

#include <cmath>

#include "quicktap/error.hpp"

namespace quicktap {

std::string_view profile_name(DeviceProfile profile) {
  return profile == DeviceProfile::kLaptop ? "laptop" : "smartphone";
}

std::optional<DeviceProfile> parse_profile(std::string_view name) {
  if (name == "laptop") return DeviceProfile::kLaptop;
  if (name == "smartphone") return DeviceProfile::kSmartphone;
  return std::nullopt;
}

FeatureProfile FeatureProfile::for_device(DeviceProfile device) {
  if (device == DeviceProfile::kSmartphone) {
    return {device, {"completion_s", "max_contact_size"}};
  }
  return {device,
          {"completion_s", "max_contact_size", "velocity_x", "velocity_y", "displacement_x",
           "displacement_y", "down_x", "down_y", "up_x", "up_y", "power"}};
}

FeatureVector extract(const TapRecord& tap, const FeatureProfile& profile) {
  const double completion_s = static_cast<double>(tap.completion.count()) / 1e6;
  FeatureVector fv;
  fv.tap_id = tap.id;
  fv.values.reserve(profile.size());
  fv.values.push_back(completion_s);
  fv.values.push_back(tap.max_contact_size);
  if (profile.device == DeviceProfile::kSmartphone) {
    return fv;
  }
  const TouchSample& down = tap.down();
  const TouchSample& up = tap.up();
  const double dx = up.x - down.x;
  const double dy = up.y - down.y;
  const double vx = completion_s > 0.0 ? dx / completion_s : 0.0;
  const double vy = completion_s > 0.0 ? dy / completion_s : 0.0;
  const double power = up.power == PowerSource::kBattery ? 1.0 : 0.0;
  fv.values.insert(fv.values.end(), {vx, vy, dx, dy, down.x, down.y, up.x, up.y, power});
  return fv;
}

Scaler standardize_fit(std::span<const FeatureVector> rows) {
  if (rows.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot fit a scaler on zero rows");
  }
  const std::size_t dims = rows.front().values.size();
  Scaler scaler;
  scaler.means.assign(dims, 0.0);
  scaler.stds.assign(dims, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].values.size() != dims) {
      throw Error(ErrorCode::kDimensionMismatch, "ragged feature rows", r);
    }
    for (std::size_t j = 0; j < dims; ++j) scaler.means[j] += rows[r].values[j];
  }
  const auto n = static_cast<double>(rows.size());
  for (double& m : scaler.means) m /= n;
  for (const FeatureVector& row : rows) {
    for (std::size_t j = 0; j < dims; ++j) {
      const double d = row.values[j] - scaler.means[j];
      scaler.stds[j] += d * d;
    }
  }
  for (double& s : scaler.stds) s = std::sqrt(s / n);
  return scaler;
}

void standardize_into(const Scaler& scaler, std::span<const double> raw, std::span<double> out) {
  if (raw.size() != scaler.size() || out.size() != scaler.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature vector has " + std::to_string(raw.size()) + " values, scaler expects " +
                    std::to_string(scaler.size()));
  }
  for (std::size_t j = 0; j < raw.size(); ++j) {
    out[j] = scaler.stds[j] > 0.0 ? (raw[j] - scaler.means[j]) / scaler.stds[j] : 0.0;
  }
}

FeatureVector standardize_apply(const Scaler& scaler, const FeatureVector& fv) {
  FeatureVector out{std::vector<double>(fv.values.size()), fv.tap_id};
  standardize_into(scaler, fv.values, out.values);
  return out;
}

}  // namespace quicktap
