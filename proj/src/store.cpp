// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include "quicktap/store.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "quicktap/error.hpp"

namespace quicktap {

using nlohmann::ordered_json;

namespace {

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::kDown: return "down";
    case Phase::kMove: return "move";
    case Phase::kUp: return "up";
  }
  return "?";
}

std::string_view power_name(PowerSource p) {
  switch (p) {
    case PowerSource::kAC: return "ac";
    case PowerSource::kBattery: return "battery";
    case PowerSource::kUnknown: return "unknown";
  }
  return "?";
}

template <typename T>
T field(const ordered_json& j, const char* key, std::size_t line) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": missing field '" + key + "'",
                line);
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line) + ": field '" + key + "' has the wrong type", line);
  }
}

double number_field(const ordered_json& j, const char* key, std::size_t line) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line) + ": field '" + key + "' must be a number", line);
  }
  return it->get<double>();
}

ordered_json parse_json_line(const std::string& text, std::size_t line) {
  try {
    ordered_json j = ordered_json::parse(text);
    if (!j.is_object()) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": expected an object", line);
    }
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + e.what(), line);
  }
}

void validation_failure(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kValidation, "line " + std::to_string(line) + ": " + what, line);
}

std::vector<double> doubles_field(const ordered_json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_array()) {
    throw Error(ErrorCode::kParse, std::string("model field '") + key + "' must be an array");
  }
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kParse, std::string("model field '") + key + "' must hold numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

ordered_json numbers(std::span<const double> values) {
  ordered_json arr = ordered_json::array();
  for (double v : values) arr.push_back(v);
  return arr;
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kValidation, std::string(what) + " contains a non-finite value");
    }
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  // Fixed notation in the everyday range keeps tables readable ("500000", not
  // "5e+05"); both forms are the shortest that round-trip.
  const double mag = std::abs(v);
  const bool fixed = mag == 0.0 || (mag >= 1e-4 && mag < 1e15);
  const auto res = fixed ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed)
                         : std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

TraceFile parse_trace(std::istream& in) {
  TraceFile trace;
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty() || text == "\r") continue;
    const ordered_json j = parse_json_line(text, line);
    if (!have_header) {
      if (!j.contains("schema_version")) {
        throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": missing trace header",
                    line);
      }
      const int version = field<int>(j, "schema_version", line);
      if (version != kTraceSchemaVersion) {
        throw Error(ErrorCode::kSchemaVersion,
                    "line " + std::to_string(line) + ": unsupported trace schema_version " +
                        std::to_string(version),
                    line);
      }
      trace.header.schema_version = version;
      const auto profile = parse_profile(field<std::string>(j, "device_profile", line));
      if (!profile) validation_failure(line, "unknown device_profile");
      trace.header.device_profile = *profile;
      trace.header.sampling_hz = number_field(j, "sampling_hz", line);
      if (!(trace.header.sampling_hz > 0.0)) validation_failure(line, "sampling_hz must be positive");
      trace.header.surface_id = field<std::string>(j, "surface_id", line);
      have_header = true;
      continue;
    }

    TouchSample s;
    const auto t_it = j.find("t_us");
    if (t_it == j.end() || !t_it->is_number_integer()) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": t_us must be an integer",
                  line);
    }
    s.t = Micros{t_it->get<long long>()};
    s.x = number_field(j, "x", line);
    s.y = number_field(j, "y", line);
    s.contact_size = number_field(j, "contact_size", line);
    const std::string phase = field<std::string>(j, "phase", line);
    if (phase == "down") s.phase = Phase::kDown;
    else if (phase == "move") s.phase = Phase::kMove;
    else if (phase == "up") s.phase = Phase::kUp;
    else validation_failure(line, "unknown phase '" + phase + "'");
    const std::string power = field<std::string>(j, "power", line);
    if (power == "ac") s.power = PowerSource::kAC;
    else if (power == "battery") s.power = PowerSource::kBattery;
    else if (power == "unknown") s.power = PowerSource::kUnknown;
    else validation_failure(line, "unknown power '" + power + "'");

    if (s.t.count() < 0) validation_failure(line, "negative timestamp");
    if (!(s.x >= 0.0 && s.x <= 1.0 && s.y >= 0.0 && s.y <= 1.0)) {
      validation_failure(line, "coordinates outside [0, 1]");
    }
    if (!(s.contact_size >= 0.0)) validation_failure(line, "negative contact_size");
    if (!trace.samples.empty() && s.t < trace.samples.back().t) {
      validation_failure(line, "timestamp regression");
    }
    trace.samples.push_back(s);
  }
  if (!have_header) throw Error(ErrorCode::kParse, "trace has no header line", 1);
  return trace;
}

TraceFile read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open trace " + path.string());
  return parse_trace(in);
}

void write_trace(std::ostream& out, const TraceFile& trace) {
  ordered_json header;
  header["schema_version"] = trace.header.schema_version;
  header["device_profile"] = profile_name(trace.header.device_profile);
  header["sampling_hz"] = trace.header.sampling_hz;
  header["surface_id"] = trace.header.surface_id;
  out << header.dump() << '\n';
  for (const TouchSample& s : trace.samples) {
    ordered_json j;
    j["t_us"] = s.t.count();
    j["x"] = s.x;
    j["y"] = s.y;
    j["contact_size"] = s.contact_size;
    j["phase"] = phase_name(s.phase);
    j["power"] = power_name(s.power);
    out << j.dump() << '\n';
  }
}

void write_trace(const std::filesystem::path& path, const TraceFile& trace) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write trace " + path.string());
  write_trace(out, trace);
  if (!out) throw Error(ErrorCode::kIo, "failed writing trace " + path.string());
}

std::string serialize_model(const ModelFile& file) {
  const ModelWeights& m = file.model;
  m.validate();
  require_finite(m.w, "weights");
  require_finite(m.scaler.means, "means");
  require_finite(m.scaler.stds, "stds");
  require_finite(std::span<const double>(&m.b, 1), "intercept");

  ordered_json j;
  j["schema_version"] = kModelSchemaVersion;
  j["profile"] = profile_name(m.profile.device);
  j["feature_names"] = m.profile.feature_names;
  j["means"] = numbers(m.scaler.means);
  j["stds"] = numbers(m.scaler.stds);
  j["weights"] = numbers(m.w);
  j["intercept"] = m.b;
  j["pat"] = m.pat;
  j["train_meta"] = {{"seed", file.meta.seed},
                     {"cost", file.meta.cost},
                     {"rounds", file.meta.rounds},
                     {"dataset_digest", file.meta.dataset_digest}};
  return j.dump(2) + "\n";
}

ModelFile parse_model(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("model file: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kParse, "model file must be a JSON object");
  const auto version = j.find("schema_version");
  if (version == j.end() || !version->is_number_integer()) {
    throw Error(ErrorCode::kParse, "model file has no integer schema_version");
  }
  if (version->get<int>() != kModelSchemaVersion) {
    throw Error(ErrorCode::kSchemaVersion,
                "unsupported model schema_version " + std::to_string(version->get<int>()));
  }

  ModelFile file;
  try {
    const auto profile = parse_profile(j.at("profile").get<std::string>());
    if (!profile) throw Error(ErrorCode::kValidation, "unknown model profile");
    file.model.profile = FeatureProfile::for_device(*profile);
    const auto names = j.at("feature_names").get<std::vector<std::string>>();
    if (names != file.model.profile.feature_names) {
      throw Error(ErrorCode::kValidation, "feature_names do not match the profile");
    }
    file.model.scaler.means = doubles_field(j, "means");
    file.model.scaler.stds = doubles_field(j, "stds");
    file.model.w = doubles_field(j, "weights");
    if (!j.at("intercept").is_number() || !j.at("pat").is_number()) {
      throw Error(ErrorCode::kParse, "intercept and pat must be numbers");
    }
    file.model.b = j.at("intercept").get<double>();
    file.model.pat = j.at("pat").get<double>();
    const auto& meta = j.at("train_meta");
    file.meta.seed = meta.at("seed").get<std::uint64_t>();
    file.meta.cost = meta.at("cost").get<double>();
    file.meta.rounds = meta.at("rounds").get<int>();
    file.meta.dataset_digest = meta.at("dataset_digest").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("model file: ") + e.what());
  }
  if (file.model.w.size() != file.model.profile.feature_names.size()) {
    throw Error(ErrorCode::kValidation, "feature_names length differs from weights length");
  }
  file.model.validate();
  return file;
}

void write_model(const std::filesystem::path& path, const ModelFile& file) {
  write_text(path, serialize_model(file));
}

ModelFile read_model(const std::filesystem::path& path) { return parse_model(read_text(path)); }

std::string replay_outcomes_csv(const ReplayReport& report) {
  std::ostringstream out;
  out << "tap_id,score,prediction,truth,cell,fired_kind,emit_t_us,latency_us\n";
  for (const TapOutcome& o : report.outcomes) {
    out << o.tap_id << ',' << (o.score ? format_double(*o.score) : "") << ','
        << (o.prediction == Prediction::kSingle ? "single" : "double") << ','
        << (o.truth == TapLabel::kSingle ? "single" : "double_first") << ',' << cell_name(o.cell)
        << ',' << (o.fired_kind == DetectorEventKind::kSingleTapFired ? "single" : "double") << ','
        << o.emit_t.count() << ',' << o.latency.count() << '\n';
  }
  return out.str();
}

std::string replay_summary_json(const ReplayReport& report) {
  ordered_json j;
  j["detector"] = report.detector;
  j["double_tap_threshold_us"] = report.latency.double_tap_threshold.count();
  j["sensing_us"] = report.latency.sensing.count();
  j["inference_us"] = report.latency.inference.count();
  j["primary_taps"] = report.outcomes.size();
  j["cell_counts"] = {{"A", report.cell_counts[0]},
                      {"B", report.cell_counts[1]},
                      {"C", report.cell_counts[2]},
                      {"D", report.cell_counts[3]}};
  j["mean_single_latency_predictive_us"] = report.mean_single_latency_predictive_us;
  j["mean_single_latency_conventional_us"] = report.mean_single_latency_conventional_us;
  j["mean_reduction_us"] = report.mean_reduction_us;
  j["false_positive_single_rate"] = report.false_positive_single_rate;
  return j.dump(2) + "\n";
}

std::string curve_csv(std::span<const CurvePoint> curve) {
  std::ostringstream out;
  out << "n_percent,subset_size,accuracy,precision,recall\n";
  for (const CurvePoint& p : curve) {
    out << format_double(p.n_percent) << ',' << p.subset_size << ',' << format_double(p.accuracy)
        << ',' << format_double(p.precision) << ',' << format_double(p.recall) << '\n';
  }
  return out.str();
}

std::string roc_csv(const RocResult& roc) {
  std::ostringstream out;
  out << "threshold,fpr,tpr\n";
  for (const RocPoint& p : roc.points) {
    out << format_double(p.threshold) << ',' << format_double(p.fpr) << ','
        << format_double(p.tpr) << '\n';
  }
  return out.str();
}

std::string train_report_json(const TrainReport& report) {
  ordered_json j;
  j["meta"] = {{"seed", report.meta.seed},
               {"cost", report.meta.cost},
               {"rounds", report.meta.rounds},
               {"dataset_digest", report.meta.dataset_digest}};
  j["mean_train_accuracy"] = report.mean_train_accuracy;
  j["mean_test_accuracy"] = report.mean_test_accuracy;
  j["mean_test_precision"] = report.mean_test_precision;
  j["mean_test_recall"] = report.mean_test_recall;
  ordered_json rounds = ordered_json::array();
  for (const RoundReport& r : report.rounds) {
    ordered_json rj;
    rj["seed"] = r.seed;
    rj["cost"] = r.cost;
    rj["weights"] = numbers(r.w);
    rj["intercept"] = r.b;
    rj["train_size"] = r.train_size;
    rj["test_size"] = r.test_size;
    rj["train_accuracy"] = r.train_accuracy;
    rj["test_accuracy"] = r.test_accuracy;
    rj["test_precision"] = r.test_precision;
    rj["test_recall"] = r.test_recall;
    rounds.push_back(std::move(rj));
  }
  j["rounds"] = std::move(rounds);
  return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace quicktap
