// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// On-disk formats.
//
// Trace files are JSON Lines. Line 1 is the header
//   {"schema_version":1,"device_profile":"laptop","sampling_hz":90.0,"surface_id":"..."}
// and every following line is one sample
//   {"t_us":0,"x":0.5,"y":0.5,"contact_size":1.0,"phase":"down","power":"ac"}
// with phase in {down, move, up} and power in {ac, battery, unknown}.
//
// Model files are one JSON document with fixed key order:
//   schema_version, profile, feature_names, means, stds, weights, intercept,
//   pat, train_meta {seed, cost, rounds, dataset_digest}
//
// Reports are CSV tables plus JSON summaries. All numbers are written in the
// shortest form that parses back to the identical double.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quicktap/classifier.hpp"
#include "quicktap/confidence.hpp"
#include "quicktap/features.hpp"
#include "quicktap/replay.hpp"
#include "quicktap/stats.hpp"
#include "quicktap/tap_stream.hpp"

namespace quicktap {

inline constexpr int kTraceSchemaVersion = 1;
inline constexpr int kModelSchemaVersion = 1;

struct TraceHeader {
  int schema_version = kTraceSchemaVersion;
  DeviceProfile device_profile = DeviceProfile::kLaptop;
  double sampling_hz = 90.0;
  std::string surface_id;

  bool operator==(const TraceHeader&) const = default;
};

struct TraceFile {
  TraceHeader header;
  std::vector<TouchSample> samples;

  bool operator==(const TraceFile&) const = default;
};

/// Errors carry the 1-based line number: kParse for malformed JSON or
/// missing fields, kSchemaVersion for an unknown version, kValidation for
/// out-of-range coordinates, negative contact sizes or timestamp regressions.
TraceFile parse_trace(std::istream& in);
TraceFile read_trace(const std::filesystem::path& path);

void write_trace(std::ostream& out, const TraceFile& trace);
void write_trace(const std::filesystem::path& path, const TraceFile& trace);

struct ModelFile {
  ModelWeights model;
  TrainMeta meta;

  bool operator==(const ModelFile&) const = default;
};

std::string serialize_model(const ModelFile& file);
/// Nothing is returned unless the whole document validates.
ModelFile parse_model(std::string_view text);

void write_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile read_model(const std::filesystem::path& path);

/// Shortest round-trip decimal rendering.
std::string format_double(double v);

std::string replay_outcomes_csv(const ReplayReport& report);
std::string replay_summary_json(const ReplayReport& report);
std::string curve_csv(std::span<const CurvePoint> curve);
std::string roc_csv(const RocResult& roc);
std::string train_report_json(const TrainReport& report);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace quicktap
