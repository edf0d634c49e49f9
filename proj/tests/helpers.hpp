// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "quicktap/tap_stream.hpp"

namespace quicktap::testing {

inline Micros us(long long v) { return Micros{v}; }

// Appends a Down, one Move at the midpoint and an Up.
inline void add_tap(std::vector<TouchSample>& stream, long long down_us, long long duration_us,
                    double x = 0.5, double y = 0.5, double size = 1.0, double dx = 0.0,
                    double dy = 0.0, PowerSource power = PowerSource::kAC) {
  stream.push_back({us(down_us), x, y, size * 0.8, Phase::kDown, power});
  stream.push_back({us(down_us + duration_us / 2), x + dx / 2, y + dy / 2, size, Phase::kMove,
                    power});
  stream.push_back({us(down_us + duration_us), x + dx, y + dy, size * 0.9, Phase::kUp, power});
}

inline TapRecord make_tap(int id, long long down_us, long long duration_us, double size = 1.0) {
  std::vector<TouchSample> s;
  add_tap(s, down_us, duration_us, 0.5, 0.5, size);
  return TapRecord::from_samples(id, std::move(s));
}

// A fresh, empty directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("quicktap_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace quicktap::testing
