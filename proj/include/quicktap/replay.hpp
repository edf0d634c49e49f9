// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Trace replay: runs ground-truth-labeled taps through the fixed-threshold
// detector and through the score-gated predictive detector, and tallies the
// four prediction/truth outcomes:
//
//                      truth single        truth double-first
//   predicted single   A latency reduced   C unintentional single
//   predicted double   B as conventional   D as conventional

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quicktap/classifier.hpp"
#include "quicktap/features.hpp"
#include "quicktap/tap_stream.hpp"

namespace quicktap {

struct LatencyConfig {
  Micros double_tap_threshold{500'000};
  Micros sensing{16'600};
  Micros inference{1'380};

  /// Touchpad: 11 ms sensing + 1 ms prediction. Smartphone: 16.6 ms sensing
  /// + 1.38 ms measured on-device prediction.
  static LatencyConfig defaults_for(DeviceProfile profile);

  /// Throws Error(kInvalidConfig) unless sensing + inference < threshold and
  /// all parts are non-negative.
  void validate() const;
};

enum class Prediction { kSingle, kDouble };

enum class OutcomeCell { kA_LatencyReduced, kB_SameAsConventional, kC_UnintentionalInput,
                         kD_SameAsConventional };

std::string_view cell_name(OutcomeCell cell);  // "A".."D"

OutcomeCell classify_outcome(Prediction prediction, TapLabel truth);

struct TapOutcome {
  int tap_id = 0;
  std::optional<double> score;  // absent for the conventional baseline
  Prediction prediction = Prediction::kDouble;
  TapLabel truth = TapLabel::kSingle;
  OutcomeCell cell = OutcomeCell::kB_SameAsConventional;
  DetectorEventKind fired_kind = DetectorEventKind::kSingleTapFired;
  Micros emit_t{0};
  // Emission time minus the touch-up the event answers: the tap's own
  // touch-up for single-tap events, the second touch-up for double-tap events.
  Micros latency{0};

  bool operator==(const TapOutcome&) const = default;
};

struct ReplayReport {
  std::string detector;  // "conventional" or "predictive"
  LatencyConfig latency;
  std::vector<TapOutcome> outcomes;
  std::array<std::size_t, 4> cell_counts{};
  double mean_single_latency_predictive_us = 0.0;
  double mean_single_latency_conventional_us = 0.0;
  double mean_reduction_us = 0.0;
  double false_positive_single_rate = 0.0;  // C / (C + D), 0 when no doubles
};

/// Replays with the model: every primary tap is scored at touch-up and fires
/// a single tap after sensing + inference when decide() says so; otherwise it
/// waits exactly like the conventional detector. Taps must be in temporal
/// order with each double-first tap followed by its partner.
///
/// Throws Error(kProfileMismatch) if the model was trained for another
/// profile, kMalformedStream if a double-first tap has no partner.
ReplayReport replay(std::span<const LabeledTap> labeled, DeviceProfile profile,
                    const ModelWeights& model, const LatencyConfig& cfg);

/// Same replay with every tap forced to wait: the conventional baseline.
ReplayReport replay_conventional(std::span<const LabeledTap> labeled, const LatencyConfig& cfg);

/// Replay from precomputed scores (one per primary tap, in order) and a PAT.
ReplayReport replay_scored(std::span<const LabeledTap> labeled, std::span<const double> scores,
                           double pat, const LatencyConfig& cfg);

struct LatencyStats {
  double mean = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
};

struct ReportComparison {
  std::array<long long, 4> cell_deltas{};  // model minus baseline
  LatencyStats single_latency_model;  // over truth-single taps, microseconds
  LatencyStats single_latency_baseline;
  LatencyStats single_latency_delta;  // model minus baseline
  double mean_reduction_us = 0.0;
  std::size_t taps = 0;

  std::string to_json() const;
  std::string to_text() const;
};

/// Throws Error(kTapSetMismatch) unless both reports cover the same taps
/// with the same truth.
ReportComparison compare_reports(const ReplayReport& with_model, const ReplayReport& baseline);

}  // namespace quicktap
