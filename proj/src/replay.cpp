// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include "quicktap/replay.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "quicktap/error.hpp"

namespace quicktap {

namespace {

std::vector<double> single_latencies(const ReplayReport& report) {
  std::vector<double> out;
  for (const TapOutcome& o : report.outcomes) {
    if (o.truth == TapLabel::kSingle) out.push_back(static_cast<double>(o.latency.count()));
  }
  return out;
}

// Nearest-rank percentile of a sorted sample.
double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const auto rank = static_cast<std::size_t>(std::ceil(q / 100.0 * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

LatencyStats stats_of(std::vector<double> values) {
  LatencyStats s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  s.p50 = percentile(values, 50);
  s.p90 = percentile(values, 90);
  s.p99 = percentile(values, 99);
  return s;
}

ReplayReport run(std::span<const LabeledTap> labeled, std::span<const double> scores,
                 std::optional<double> pat, const LatencyConfig& cfg) {
  cfg.validate();
  ReplayReport report;
  report.detector = pat ? "predictive" : "conventional";
  report.latency = cfg;

  std::size_t next_score = 0;
  double single_latency_total = 0.0;
  std::size_t singles = 0;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    const LabeledTap& lt = labeled[i];
    if (lt.role == TapRole::kDoubleSecond) continue;

    TapOutcome o;
    o.tap_id = lt.tap.id;
    o.truth = lt.label;
    bool fire_now = false;
    if (pat) {
      if (next_score >= scores.size()) {
        throw Error(ErrorCode::kDimensionMismatch, "fewer scores than primary taps");
      }
      o.score = scores[next_score++];
      fire_now = decide(*pat, *o.score) == Decision::kSingleTapNow;
    }
    const Micros up = lt.tap.up().t;
    if (fire_now) {
      o.prediction = Prediction::kSingle;
      o.fired_kind = DetectorEventKind::kSingleTapFired;
      o.emit_t = up + cfg.sensing + cfg.inference;
      o.latency = o.emit_t - up;
    } else if (lt.label == TapLabel::kDoubleFirst) {
      if (i + 1 >= labeled.size() || labeled[i + 1].role != TapRole::kDoubleSecond) {
        throw Error(ErrorCode::kMalformedStream,
                    "double-first tap " + std::to_string(lt.tap.id) + " has no partner", i);
      }
      const Micros second_up = labeled[i + 1].tap.up().t;
      o.prediction = Prediction::kDouble;
      o.fired_kind = DetectorEventKind::kDoubleTapFired;
      o.emit_t = second_up;
      o.latency = o.emit_t - second_up;
    } else {
      o.prediction = Prediction::kDouble;
      o.fired_kind = DetectorEventKind::kSingleTapFired;
      o.emit_t = up + cfg.double_tap_threshold;
      o.latency = o.emit_t - up;
    }
    o.cell = classify_outcome(o.prediction, o.truth);
    report.cell_counts[static_cast<std::size_t>(o.cell)]++;
    if (o.truth == TapLabel::kSingle) {
      single_latency_total += static_cast<double>(o.latency.count());
      ++singles;
    }
    report.outcomes.push_back(std::move(o));
  }
  if (pat && next_score != scores.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "more scores than primary taps");
  }

  const double threshold_us = static_cast<double>(cfg.double_tap_threshold.count());
  report.mean_single_latency_conventional_us = threshold_us;
  report.mean_single_latency_predictive_us =
      singles == 0 ? threshold_us : single_latency_total / static_cast<double>(singles);
  report.mean_reduction_us =
      report.mean_single_latency_conventional_us - report.mean_single_latency_predictive_us;
  const std::size_t c = report.cell_counts[2];
  const std::size_t d = report.cell_counts[3];
  report.false_positive_single_rate =
      c + d == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(c + d);
  return report;
}

}  // namespace

LatencyConfig LatencyConfig::defaults_for(DeviceProfile profile) {
  if (profile == DeviceProfile::kLaptop) {
    return {Micros{500'000}, Micros{11'000}, Micros{1'000}};
  }
  return {Micros{500'000}, Micros{16'600}, Micros{1'380}};
}

void LatencyConfig::validate() const {
  if (sensing.count() < 0 || inference.count() < 0 || double_tap_threshold.count() <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "latency components must be non-negative");
  }
  if (sensing + inference >= double_tap_threshold) {
    throw Error(ErrorCode::kInvalidConfig,
                "sensing + inference latency must stay below the double-tap threshold");
  }
}

std::string_view cell_name(OutcomeCell cell) {
  switch (cell) {
    case OutcomeCell::kA_LatencyReduced: return "A";
    case OutcomeCell::kB_SameAsConventional: return "B";
    case OutcomeCell::kC_UnintentionalInput: return "C";
    case OutcomeCell::kD_SameAsConventional: return "D";
  }
  return "?";
}

OutcomeCell classify_outcome(Prediction prediction, TapLabel truth) {
  if (prediction == Prediction::kSingle) {
    return truth == TapLabel::kSingle ? OutcomeCell::kA_LatencyReduced
                                      : OutcomeCell::kC_UnintentionalInput;
  }
  return truth == TapLabel::kSingle ? OutcomeCell::kB_SameAsConventional
                                    : OutcomeCell::kD_SameAsConventional;
}

ReplayReport replay_scored(std::span<const LabeledTap> labeled, std::span<const double> scores,
                           double pat, const LatencyConfig& cfg) {
  return run(labeled, scores, pat, cfg);
}

ReplayReport replay(std::span<const LabeledTap> labeled, DeviceProfile profile,
                    const ModelWeights& model, const LatencyConfig& cfg) {
  if (model.profile.device != profile) {
    throw Error(ErrorCode::kProfileMismatch,
                "model was trained for " + std::string(profile_name(model.profile.device)) +
                    ", trace is " + std::string(profile_name(profile)));
  }
  std::vector<FeatureVector> fvs;
  for (const LabeledTap& lt : labeled) {
    if (lt.role == TapRole::kPrimary) fvs.push_back(extract(lt.tap, model.profile));
  }
  const std::vector<double> scores = score_batch(model, fvs);
  return run(labeled, scores, model.pat, cfg);
}

ReplayReport replay_conventional(std::span<const LabeledTap> labeled, const LatencyConfig& cfg) {
  return run(labeled, {}, std::nullopt, cfg);
}

ReportComparison compare_reports(const ReplayReport& with_model, const ReplayReport& baseline) {
  if (with_model.outcomes.size() != baseline.outcomes.size()) {
    throw Error(ErrorCode::kTapSetMismatch, "reports cover different numbers of taps");
  }
  for (std::size_t i = 0; i < baseline.outcomes.size(); ++i) {
    const TapOutcome& a = with_model.outcomes[i];
    const TapOutcome& b = baseline.outcomes[i];
    if (a.tap_id != b.tap_id || a.truth != b.truth) {
      throw Error(ErrorCode::kTapSetMismatch,
                  "reports diverge at outcome " + std::to_string(i), i);
    }
  }
  ReportComparison cmp;
  cmp.taps = baseline.outcomes.size();
  for (std::size_t c = 0; c < 4; ++c) {
    cmp.cell_deltas[c] = static_cast<long long>(with_model.cell_counts[c]) -
                         static_cast<long long>(baseline.cell_counts[c]);
  }
  cmp.single_latency_model = stats_of(single_latencies(with_model));
  cmp.single_latency_baseline = stats_of(single_latencies(baseline));
  cmp.single_latency_delta = {cmp.single_latency_model.mean - cmp.single_latency_baseline.mean,
                              cmp.single_latency_model.p50 - cmp.single_latency_baseline.p50,
                              cmp.single_latency_model.p90 - cmp.single_latency_baseline.p90,
                              cmp.single_latency_model.p99 - cmp.single_latency_baseline.p99};
  cmp.mean_reduction_us = with_model.mean_reduction_us - baseline.mean_reduction_us;
  return cmp;
}

std::string ReportComparison::to_json() const {
  using nlohmann::ordered_json;
  const auto stats_json = [](const LatencyStats& s) {
    return ordered_json{{"mean", s.mean}, {"p50", s.p50}, {"p90", s.p90}, {"p99", s.p99}};
  };
  ordered_json j;
  j["taps"] = taps;
  j["cell_deltas"] = {{"A", cell_deltas[0]}, {"B", cell_deltas[1]}, {"C", cell_deltas[2]},
                      {"D", cell_deltas[3]}};
  j["single_latency_us"] = {{"model", stats_json(single_latency_model)},
                            {"baseline", stats_json(single_latency_baseline)},
                            {"delta", stats_json(single_latency_delta)}};
  j["mean_reduction_us"] = mean_reduction_us;
  return j.dump(2) + "\n";
}

std::string ReportComparison::to_text() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "taps compared: %zu\n", taps);
  out << line;
  out << "cell deltas (model - baseline):";
  for (std::size_t c = 0; c < 4; ++c) {
    out << ' ' << "ABCD"[c] << '=' << (cell_deltas[c] > 0 ? "+" : "") << cell_deltas[c];
  }
  out << '\n';
  out << "single-tap latency (ms)    mean       p50       p90       p99\n";
  const auto row = [&](const char* name, const LatencyStats& s) {
    std::snprintf(line, sizeof line, "  %-22s %9.3f %9.3f %9.3f %9.3f\n", name, s.mean / 1000.0,
                  s.p50 / 1000.0, s.p90 / 1000.0, s.p99 / 1000.0);
    out << line;
  };
  row("model", single_latency_model);
  row("baseline", single_latency_baseline);
  row("delta", single_latency_delta);
  std::snprintf(line, sizeof line, "mean single-tap reduction: %.3f ms\n", mean_reduction_us / 1000.0);
  out << line;
  return out.str();
}

}  // namespace quicktap
