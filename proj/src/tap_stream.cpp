// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include "quicktap/tap_stream.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quicktap/error.hpp"

namespace quicktap {

TapRecord TapRecord::from_samples(int id, std::vector<TouchSample> samples) {
  TapRecord tap;
  tap.id = id;
  tap.samples = std::move(samples);
  for (const TouchSample& s : tap.samples) {
    tap.max_contact_size = std::max(tap.max_contact_size, s.contact_size);
  }
  tap.completion = tap.up().t - tap.down().t;
  return tap;
}

std::optional<TapRecord> TapSegmenter::feed(const TouchSample& sample, std::size_t index) {
  if (last_t_ && sample.t < *last_t_) {
    throw Error(ErrorCode::kMalformedStream,
                "timestamp regression at sample " + std::to_string(index), index);
  }
  last_t_ = sample.t;
  switch (sample.phase) {
    case Phase::kDown:
      if (!current_.empty()) {
        throw Error(ErrorCode::kMalformedStream,
                    "touch-down inside an open contact at sample " + std::to_string(index),
                    index);
      }
      current_.push_back(sample);
      return std::nullopt;
    case Phase::kMove:
      if (current_.empty()) {
        throw Error(ErrorCode::kMalformedStream,
                    "move without prior touch-down at sample " + std::to_string(index), index);
      }
      current_.push_back(sample);
      return std::nullopt;
    case Phase::kUp:
      break;
  }
  if (current_.empty()) {
    throw Error(ErrorCode::kMalformedStream,
                "touch-up without prior touch-down at sample " + std::to_string(index), index);
  }
  current_.push_back(sample);
  std::vector<TouchSample> run;
  run.swap(current_);

  double travel_x = 0.0;
  double travel_y = 0.0;
  for (std::size_t i = 1; i < run.size(); ++i) {
    travel_x += std::abs(run[i].x - run[i - 1].x);
    travel_y += std::abs(run[i].y - run[i - 1].y);
  }
  const Micros duration = run.back().t - run.front().t;
  if (duration > config_.max_tap || travel_x > config_.max_travel ||
      travel_y > config_.max_travel) {
    return std::nullopt;  // drag or long press
  }
  return TapRecord::from_samples(next_id_++, std::move(run));
}

std::vector<TapRecord> segment_taps(std::span<const TouchSample> stream,
                                    const SegmentConfig& config) {
  TapSegmenter segmenter(config);
  std::vector<TapRecord> taps;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (auto tap = segmenter.feed(stream[i], i)) {
      taps.push_back(std::move(*tap));
    }
  }
  return taps;
}

std::vector<LabeledTap> label_taps(std::vector<TapRecord> taps, Micros threshold) {
  std::vector<LabeledTap> out;
  out.reserve(taps.size());
  for (TapRecord& tap : taps) {
    out.push_back(LabeledTap{std::move(tap), TapLabel::kSingle, TapRole::kPrimary});
  }
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    if (out[i].role == TapRole::kDoubleSecond) continue;
    const Micros gap = out[i + 1].tap.down().t - out[i].tap.up().t;
    if (gap < threshold) {
      out[i].label = TapLabel::kDoubleFirst;
      out[i + 1].role = TapRole::kDoubleSecond;
    }
  }
  return out;
}

std::vector<DetectorEvent> ConventionalDetector::on_tap(const TapRecord& tap) {
  std::vector<DetectorEvent> events;
  if (pending_) {
    if (tap.down().t - pending_->up().t < threshold_) {
      events.push_back({DetectorEventKind::kDoubleTapFired, tap.up().t, pending_->id});
      pending_.reset();
      return events;
    }
    events.push_back(
        {DetectorEventKind::kSingleTapFired, pending_->up().t + threshold_, pending_->id});
  }
  pending_ = tap;
  return events;
}

std::vector<DetectorEvent> ConventionalDetector::flush() {
  std::vector<DetectorEvent> events;
  if (pending_) {
    events.push_back(
        {DetectorEventKind::kSingleTapFired, pending_->up().t + threshold_, pending_->id});
    pending_.reset();
  }
  return events;
}

std::vector<DetectorEvent> conventional_detect(std::span<const TapRecord> taps, Micros threshold) {
  ConventionalDetector detector(threshold);
  std::vector<DetectorEvent> events;
  for (const TapRecord& tap : taps) {
    auto due = detector.on_tap(tap);
    events.insert(events.end(), due.begin(), due.end());
  }
  auto rest = detector.flush();
  events.insert(events.end(), rest.begin(), rest.end());
  return events;
}

}  // namespace quicktap
