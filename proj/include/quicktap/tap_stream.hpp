// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace quicktap {

/// Integer microseconds keep every latency sum exact.
using Micros = std::chrono::microseconds;

enum class Phase { kDown, kMove, kUp };
enum class PowerSource { kAC, kBattery, kUnknown };

/// One sensor frame. Coordinates are normalized to [0, 1] with the origin at
/// the upper-left corner of the surface.
struct TouchSample {
  Micros t{0};
  double x = 0.0;
  double y = 0.0;
  double contact_size = 0.0;
  Phase phase = Phase::kMove;
  PowerSource power = PowerSource::kUnknown;

  bool operator==(const TouchSample&) const = default;
};

/// A contact from touch-down to touch-up, inclusive.
struct TapRecord {
  int id = 0;
  std::vector<TouchSample> samples;  // front() is Down, back() is Up
  double max_contact_size = 0.0;
  Micros completion{0};

  const TouchSample& down() const { return samples.front(); }
  const TouchSample& up() const { return samples.back(); }

  /// Builds a record from a Down..Up run, deriving the extrema.
  static TapRecord from_samples(int id, std::vector<TouchSample> samples);
};

enum class TapLabel { kSingle, kDoubleFirst };
enum class TapRole { kPrimary, kDoubleSecond };

/// Ground truth for one tap. The trailing tap of a double carries role
/// kDoubleSecond and label kSingle; it is kept so the double's completion
/// time can be replayed, but never trained on or scored.
struct LabeledTap {
  TapRecord tap;
  TapLabel label = TapLabel::kSingle;
  TapRole role = TapRole::kPrimary;
};

struct SegmentConfig {
  Micros max_tap{500'000};
  double max_travel = 0.05;  // accumulated path length per axis, normalized units
};

inline constexpr Micros kDefaultDoubleTapThreshold{500'000};

/// Incremental form of segment_taps. Feed samples in order; a TapRecord comes
/// back on each accepted touch-up. Not safe for concurrent feeding.
class TapSegmenter {
 public:
  explicit TapSegmenter(SegmentConfig config = {}) : config_(config) {}

  /// `index` is only used in error reports.
  std::optional<TapRecord> feed(const TouchSample& sample, std::size_t index);

  bool in_contact() const { return !current_.empty(); }

 private:
  SegmentConfig config_;
  std::vector<TouchSample> current_;
  std::optional<Micros> last_t_;
  int next_id_ = 0;
};

/// Splits a raw stream into taps. Contacts that last longer than
/// config.max_tap or travel farther than config.max_travel on either axis are
/// drags and are dropped. Throws Error(kMalformedStream) naming the sample
/// index on an Up/Move without a Down, a Down inside an open contact, or a
/// timestamp regression.
std::vector<TapRecord> segment_taps(std::span<const TouchSample> stream,
                                    const SegmentConfig& config = {});

/// Pairs taps into doubles greedily from the left: tap i opens a double when
/// the next tap's touch-down follows its touch-up by less than `threshold`.
std::vector<LabeledTap> label_taps(std::vector<TapRecord> taps,
                                   Micros threshold = kDefaultDoubleTapThreshold);

enum class DetectorEventKind { kSingleTapFired, kDoubleTapFired };

struct DetectorEvent {
  DetectorEventKind kind = DetectorEventKind::kSingleTapFired;
  Micros emit_t{0};
  int source_tap_id = 0;

  bool operator==(const DetectorEvent&) const = default;
};

/// Fixed-threshold detector state machine: a tap is held for `threshold`
/// after touch-up waiting for a second tap. Single taps fire when the window
/// closes; doubles fire on the second touch-up.
class ConventionalDetector {
 public:
  explicit ConventionalDetector(Micros threshold = kDefaultDoubleTapThreshold)
      : threshold_(threshold) {}

  /// Processes the next completed tap; returns events that became due.
  std::vector<DetectorEvent> on_tap(const TapRecord& tap);
  /// Closes any pending wait window.
  std::vector<DetectorEvent> flush();

 private:
  Micros threshold_;
  std::optional<TapRecord> pending_;
};

std::vector<DetectorEvent> conventional_detect(std::span<const TapRecord> taps,
                                               Micros threshold = kDefaultDoubleTapThreshold);

}  // namespace quicktap
