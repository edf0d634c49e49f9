// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "quicktap/features.hpp"
#include "quicktap/tap_stream.hpp"

namespace quicktap {

/// Parameters of the synthetic tap generator. Double taps are planted as the
/// faster, harder gesture: shorter completion time, larger contact and a
/// little more travel. `separation` scales every class difference; at 0 the
/// two classes share one distribution.
struct SynthConfig {
  int users = 17;
  int taps_per_user = 400;  // primary taps: singles plus double-firsts
  double single_fraction = 0.5;
  DeviceProfile profile = DeviceProfile::kSmartphone;
  double sampling_hz = 0.0;  // 0 picks 90 Hz for laptop, 60 Hz for smartphone
  double separation = 1.0;
  std::uint64_t seed = 0;

  // Completion time, lognormal, parameterized by its mean.
  double single_completion_mean_ms = 140.0;
  double double_completion_mean_ms = 80.0;
  double completion_sigma = 0.3;

  // Peak contact size, normal, truncated at 0.
  double contact_mean = 1.0;
  double double_contact_gain = 0.10;
  double contact_sd = 0.03;

  // Up-minus-down travel per axis, normal, clipped to +/-0.03.
  double double_travel_mean = 0.002;
  double travel_sd = 0.003;

  // Touch-up to touch-down gaps.
  Micros double_gap_min{60'000};
  Micros double_gap_max{300'000};
  Micros idle_gap_min{700'000};
  Micros idle_gap_max{2'000'000};
  Micros double_tap_threshold{500'000};

  // Per-user random offsets.
  double user_completion_log_sd = 0.15;
  double user_contact_log_sd = 0.10;

  /// Throws Error(kInvalidConfig) on out-of-range fields.
  void validate() const;
  double effective_sampling_hz() const;
};

struct SynthUser {
  int user_id = 0;
  std::vector<TouchSample> stream;
  std::vector<LabeledTap> taps;  // label_taps(segment_taps(stream))
};

/// Deterministic in cfg.seed; each user draws from its own derived stream.
/// The planted labels are checked against segment_taps + label_taps on the
/// generated stream and an Error(kValidation) is raised on any disagreement.
std::vector<SynthUser> generate(const SynthConfig& cfg);

}  // namespace quicktap
