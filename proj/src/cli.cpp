// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include "quicktap/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "quicktap/classifier.hpp"
#include "quicktap/confidence.hpp"
#include "quicktap/error.hpp"
#include "quicktap/kernels.hpp"
#include "quicktap/random.hpp"
#include "quicktap/replay.hpp"
#include "quicktap/stats.hpp"
#include "quicktap/store.hpp"
#include "quicktap/synth.hpp"

namespace quicktap::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct LoadedTrace {
  std::string surface_id;
  DeviceProfile profile = DeviceProfile::kLaptop;
  std::vector<LabeledTap> taps;
};

struct Options {
  // shared
  std::string out_dir;
  std::vector<std::string> traces;
  std::string model_path;
  std::string profile;
  std::uint64_t seed = 0;
  std::string kernels = "auto";
  long long threshold_us = 500'000;
  std::optional<double> pat;
  std::optional<long long> sensing_us;
  std::optional<long long> inference_us;
  std::string n_grid = "10,20,30,40,50,60,70,80,90,100";
  std::string mode = "half";
  // gen
  int users = 17;
  int taps_per_user = 400;
  double single_fraction = 0.5;
  double separation = 1.0;
  double sampling_hz = 0.0;
  // train
  int rounds = 10;
  int folds = 10;
  std::string cost_grid = "0.01,0.1,1,10,100";
  bool tune_pat = false;
  bool no_balance = false;
  double test_fraction = 0.1;
  double solver_tol = 1e-5;
  int max_iter = 1000;
  bool within_user = false;
  // export-model
  int fixture_size = 100;
};

// Writes `text` and reads it back; the artifact only counts once both agree.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void text(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    write_text(path, content);
    if (read_text(path) != content) {
      throw Error(ErrorCode::kIo, "read-back mismatch for " + path.string());
    }
    written_.push_back(name);
  }

  void model(const std::string& name, const ModelFile& file) {
    const fs::path path = dir_ / name;
    write_model(path, file);
    if (!(read_model(path) == file)) {
      throw Error(ErrorCode::kIo, "model read-back mismatch for " + path.string());
    }
    written_.push_back(name);
  }

  void trace(const std::string& name, const TraceFile& file) {
    const fs::path path = dir_ / name;
    write_trace(path, file);
    if (!(read_trace(path) == file)) {
      throw Error(ErrorCode::kIo, "trace read-back mismatch for " + path.string());
    }
    written_.push_back(name);
  }

  void manifest(const std::string& subcommand, ordered_json config) {
    ordered_json j;
    j["subcommand"] = subcommand;
    j["kernel_backend"] = kernels::backend_name(kernels::active_backend());
    j["config"] = std::move(config);
    j["artifacts"] = written_;
    text("manifest.json", j.dump(2) + "\n");
  }

 private:
  fs::path dir_;
  std::vector<std::string> written_;
};

std::vector<double> parse_number_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidConfig, std::string("bad ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidConfig, std::string(what) + " is empty");
  return out;
}

std::optional<DeviceProfile> requested_profile(const Options& o) {
  if (o.profile.empty()) return std::nullopt;
  const auto p = parse_profile(o.profile);
  if (!p) throw Error(ErrorCode::kInvalidConfig, "unknown profile '" + o.profile + "'");
  return p;
}

std::vector<fs::path> expand_traces(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const std::string& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  if (out.empty()) throw Error(ErrorCode::kEmptyInput, "no trace files given");
  return out;
}

std::vector<LoadedTrace> load_traces(const Options& o) {
  const auto want = requested_profile(o);
  std::vector<LoadedTrace> out;
  for (const fs::path& path : expand_traces(o.traces)) {
    TraceFile file = read_trace(path);
    if (want && file.header.device_profile != *want) {
      throw Error(ErrorCode::kProfileMismatch,
                  path.string() + " is a " +
                      std::string(profile_name(file.header.device_profile)) + " trace");
    }
    if (!out.empty() && out.front().profile != file.header.device_profile) {
      throw Error(ErrorCode::kProfileMismatch, "traces mix device profiles");
    }
    SegmentConfig seg;
    seg.max_tap = Micros{o.threshold_us};
    out.push_back({file.header.surface_id, file.header.device_profile,
                   label_taps(segment_taps(file.samples, seg), Micros{o.threshold_us})});
  }
  return out;
}

// All traces in one list, tap ids renumbered to stay unique.
std::vector<LabeledTap> concatenate(const std::vector<LoadedTrace>& traces) {
  std::vector<LabeledTap> all;
  for (const LoadedTrace& t : traces) {
    for (LabeledTap lt : t.taps) {
      lt.tap.id = static_cast<int>(all.size());
      all.push_back(std::move(lt));
    }
  }
  return all;
}

TrainConfig train_config(const Options& o) {
  TrainConfig cfg;
  cfg.cost_grid = parse_number_list(o.cost_grid, "cost grid");
  cfg.cv_folds = o.folds;
  cfg.rounds = o.rounds;
  cfg.balance = !o.no_balance;
  cfg.seed = o.seed;
  cfg.solver_tol = o.solver_tol;
  cfg.max_iter = o.max_iter;
  cfg.test_fraction = o.test_fraction;
  cfg.pat = o.pat.value_or(kDefaultPat);
  cfg.tune_pat = o.tune_pat;
  cfg.validate();
  return cfg;
}

ordered_json train_config_json(const TrainConfig& cfg) {
  return {{"cost_grid", cfg.cost_grid},   {"cv_folds", cfg.cv_folds},
          {"rounds", cfg.rounds},         {"balance", cfg.balance},
          {"seed", cfg.seed},             {"solver_tol", cfg.solver_tol},
          {"max_iter", cfg.max_iter},     {"test_fraction", cfg.test_fraction},
          {"pat", cfg.pat},               {"tune_pat", cfg.tune_pat}};
}

PatMode pat_mode(const Options& o) {
  if (o.mode == "pat") return PatMode::kByPat;
  if (o.mode == "half") return PatMode::kByHalf;
  throw Error(ErrorCode::kInvalidConfig, "mode must be 'pat' or 'half'");
}

std::vector<ScoredTap> score_taps(const ModelWeights& model, std::span<const LabeledTap> taps) {
  std::vector<FeatureVector> fvs;
  std::vector<ScoredTap> out;
  for (const LabeledTap& lt : taps) {
    if (lt.role != TapRole::kPrimary) continue;
    fvs.push_back(extract(lt.tap, model.profile));
    out.push_back({lt.tap.id, 0.0, lt.label});
  }
  const std::vector<double> s = score_batch(model, fvs);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].s = s[i];
  return out;
}

ModelWeights load_model_for(const Options& o, DeviceProfile trace_profile) {
  ModelWeights model = read_model(o.model_path).model;
  if (model.profile.device != trace_profile) {
    throw Error(ErrorCode::kProfileMismatch, "model profile differs from trace profile");
  }
  if (o.pat) {
    model.pat = *o.pat;
    model.validate();
  }
  return model;
}

std::string safe_name(const std::string& surface) {
  std::string out = surface;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return out.empty() ? "trace" : out;
}

// ---------------------------------------------------------------- commands

void cmd_gen(const Options& o) {
  SynthConfig cfg;
  cfg.users = o.users;
  cfg.taps_per_user = o.taps_per_user;
  cfg.single_fraction = o.single_fraction;
  cfg.profile = requested_profile(o).value_or(DeviceProfile::kSmartphone);
  cfg.sampling_hz = o.sampling_hz;
  cfg.separation = o.separation;
  cfg.seed = o.seed;
  cfg.double_tap_threshold = Micros{o.threshold_us};
  const std::vector<SynthUser> users = generate(cfg);

  ArtifactWriter out(o.out_dir);
  for (const SynthUser& u : users) {
    char name[32];
    std::snprintf(name, sizeof name, "user_%02d", u.user_id);
    TraceFile file;
    file.header.device_profile = cfg.profile;
    file.header.sampling_hz = cfg.effective_sampling_hz();
    file.header.surface_id = std::string("synth-") + name;
    file.samples = u.stream;
    out.trace(std::string(name) + ".jsonl", file);
  }
  out.manifest("gen", {{"out_dir", o.out_dir},
                       {"profile", profile_name(cfg.profile)},
                       {"seed", cfg.seed},
                       {"users", cfg.users},
                       {"taps_per_user", cfg.taps_per_user},
                       {"single_fraction", cfg.single_fraction},
                       {"separation", cfg.separation},
                       {"sampling_hz", cfg.effective_sampling_hz()},
                       {"double_tap_threshold_us", o.threshold_us}});
}

void cmd_train(const Options& o) {
  const auto traces = load_traces(o);
  const TrainConfig cfg = train_config(o);
  const auto all = concatenate(traces);
  const TrainResult result = train(all, FeatureProfile::for_device(traces.front().profile), cfg);

  ArtifactWriter out(o.out_dir);
  out.model("model.json", ModelFile{result.model, result.report.meta});
  out.text("train_report.json", train_report_json(result.report));
  ordered_json config = train_config_json(cfg);
  config["traces"] = o.traces;
  config["out_dir"] = o.out_dir;
  config["profile"] = profile_name(traces.front().profile);
  config["double_tap_threshold_us"] = o.threshold_us;
  out.manifest("train", std::move(config));
}

void cmd_eval(const Options& o) {
  const auto traces = load_traces(o);
  const std::vector<double> grid = parse_number_list(o.n_grid, "n grid");
  const PatMode mode = pat_mode(o);
  ArtifactWriter out(o.out_dir);
  ordered_json config{{"traces", o.traces}, {"out_dir", o.out_dir},
                      {"profile", profile_name(traces.front().profile)},
                      {"n_grid", grid}, {"mode", o.mode},
                      {"double_tap_threshold_us", o.threshold_us}};

  if (o.within_user) {
    const TrainConfig cfg = train_config(o);
    const FeatureProfile profile = FeatureProfile::for_device(traces.front().profile);
    std::vector<CurvePoint> mean(grid.size());
    for (const LoadedTrace& t : traces) {
      const TrainResult result = train(t.taps, profile, cfg);
      const auto curve = accuracy_curve(result.report.pooled_held_out(), grid, mode,
                                        result.model.pat);
      out.text("accuracy_" + safe_name(t.surface_id) + ".csv", curve_csv(curve));
      for (std::size_t k = 0; k < grid.size(); ++k) {
        mean[k].n_percent = grid[k];
        mean[k].subset_size += curve[k].subset_size;
        mean[k].accuracy += curve[k].accuracy / static_cast<double>(traces.size());
        mean[k].precision += curve[k].precision / static_cast<double>(traces.size());
        mean[k].recall += curve[k].recall / static_cast<double>(traces.size());
      }
    }
    out.text("accuracy_mean.csv", curve_csv(mean));
    config["within_user"] = true;
    config["train"] = train_config_json(cfg);
  } else {
    if (o.model_path.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "eval needs --model or --within-user");
    }
    const ModelWeights model = load_model_for(o, traces.front().profile);
    const auto all = concatenate(traces);
    const auto scored = score_taps(model, all);
    out.text("accuracy.csv", curve_csv(accuracy_curve(scored, grid, mode, model.pat)));
    config["model"] = o.model_path;
    config["pat"] = model.pat;
  }
  out.manifest("eval", std::move(config));
}

LatencyConfig latency_config(const Options& o, DeviceProfile profile) {
  LatencyConfig cfg = LatencyConfig::defaults_for(profile);
  cfg.double_tap_threshold = Micros{o.threshold_us};
  if (o.sensing_us) cfg.sensing = Micros{*o.sensing_us};
  if (o.inference_us) cfg.inference = Micros{*o.inference_us};
  cfg.validate();
  return cfg;
}

void cmd_replay(const Options& o) {
  const auto traces = load_traces(o);
  const DeviceProfile profile = traces.front().profile;
  const ModelWeights model = load_model_for(o, profile);
  const LatencyConfig lat = latency_config(o, profile);
  const auto all = concatenate(traces);
  const ReplayReport predictive = replay(all, profile, model, lat);
  const ReplayReport baseline = replay_conventional(all, lat);
  const ReportComparison cmp = compare_reports(predictive, baseline);

  ArtifactWriter out(o.out_dir);
  out.text("baseline_taps.csv", replay_outcomes_csv(baseline));
  out.text("baseline_summary.json", replay_summary_json(baseline));
  out.text("predictive_taps.csv", replay_outcomes_csv(predictive));
  out.text("predictive_summary.json", replay_summary_json(predictive));
  out.text("comparison.json", cmp.to_json());
  out.text("comparison.txt", cmp.to_text());
  out.manifest("replay", {{"traces", o.traces},
                          {"model", o.model_path},
                          {"out_dir", o.out_dir},
                          {"profile", profile_name(profile)},
                          {"pat", model.pat},
                          {"double_tap_threshold_us", lat.double_tap_threshold.count()},
                          {"sensing_us", lat.sensing.count()},
                          {"inference_us", lat.inference.count()}});
}

void cmd_curve(const Options& o) {
  const auto traces = load_traces(o);
  const ModelWeights model = load_model_for(o, traces.front().profile);
  const std::vector<double> grid = parse_number_list(o.n_grid, "n grid");
  const auto scored = score_taps(model, concatenate(traces));

  ArtifactWriter out(o.out_dir);
  std::ostringstream auc;
  auc << "n_percent,subset_size,auc\n";
  for (double n : grid) {
    const auto subset = top_n_extract(scored, n);
    std::string value = "nan";
    try {
      const RocResult roc = roc_auc(subset);
      value = format_double(roc.auc);
      out.text("roc_n" + format_double(n) + ".csv", roc_csv(roc));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMissingClass) throw;
    }
    auc << format_double(n) << ',' << subset.size() << ',' << value << '\n';
  }
  out.text("auc.csv", auc.str());
  out.manifest("curve", {{"traces", o.traces},
                         {"model", o.model_path},
                         {"out_dir", o.out_dir},
                         {"n_grid", grid},
                         {"roc_scope", "each top-n% subset independently"},
                         {"double_tap_threshold_us", o.threshold_us}});
}

void cmd_export_model(const Options& o) {
  const ModelFile file = read_model(o.model_path);
  const ModelWeights& model = file.model;
  if (o.fixture_size < 1) throw Error(ErrorCode::kInvalidConfig, "fixture size must be positive");

  std::mt19937_64 rng(derive_seed(o.seed, 0xf1));
  std::normal_distribution<double> unit(0.0, 1.5);
  ordered_json vectors = ordered_json::array();
  for (int i = 0; i < o.fixture_size; ++i) {
    FeatureVector fv;
    fv.tap_id = i;
    for (std::size_t j = 0; j < model.w.size(); ++j) {
      const double spread = model.scaler.stds[j] > 0.0 ? model.scaler.stds[j] : 1.0;
      fv.values.push_back(model.scaler.means[j] + spread * unit(rng));
    }
    vectors.push_back({{"values", fv.values}, {"score", score(model, fv)}});
  }
  ordered_json fixture;
  fixture["profile"] = profile_name(model.profile.device);
  fixture["feature_names"] = model.profile.feature_names;
  fixture["tolerance"] = 1e-6;
  fixture["vectors"] = std::move(vectors);

  ArtifactWriter out(o.out_dir);
  out.model("model.json", file);
  out.text("conformance.json", fixture.dump(2) + "\n");
  out.manifest("export-model", {{"model", o.model_path},
                                {"out_dir", o.out_dir},
                                {"seed", o.seed},
                                {"fixture_size", o.fixture_size}});
}

void cmd_stats(const Options& o) {
  const auto traces = load_traces(o);
  const FeatureProfile profile = FeatureProfile::for_device(traces.front().profile);

  std::vector<std::pair<std::string, std::vector<LabeledTap>>> groups;
  groups.emplace_back("all", concatenate(traces));
  for (const LoadedTrace& t : traces) groups.emplace_back(t.surface_id, t.taps);

  std::ostringstream csv;
  csv << "group,feature,n_single,n_double,u,z,p_two_sided,exact,cohens_d,descriptor\n";
  for (const auto& [name, taps] : groups) {
    std::vector<std::vector<double>> singles(profile.size());
    std::vector<std::vector<double>> doubles(profile.size());
    for (const LabeledTap& lt : taps) {
      if (lt.role != TapRole::kPrimary) continue;
      const FeatureVector fv = extract(lt.tap, profile);
      for (std::size_t j = 0; j < profile.size(); ++j) {
        (lt.label == TapLabel::kSingle ? singles : doubles)[j].push_back(fv.values[j]);
      }
    }
    for (std::size_t j = 0; j < profile.size(); ++j) {
      if (singles[j].empty() || doubles[j].empty()) continue;
      const UTestResult u = mann_whitney_u(singles[j], doubles[j]);
      std::string d = "";
      std::string desc = "n/a";
      try {
        const EffectSize e = cohens_d(singles[j], doubles[j]);
        d = format_double(e.d);
        desc = descriptor_name(e.descriptor);
      } catch (const Error&) {
      }
      csv << name << ',' << profile.feature_names[j] << ',' << u.n1 << ',' << u.n2 << ','
          << format_double(u.u) << ',' << format_double(u.z) << ','
          << format_double(u.p_two_sided) << ',' << (u.exact ? "true" : "false") << ',' << d
          << ',' << desc << '\n';
    }
  }
  ArtifactWriter out(o.out_dir);
  out.text("stats.csv", csv.str());
  out.manifest("stats", {{"traces", o.traces},
                         {"out_dir", o.out_dir},
                         {"groups", "single vs double-first per feature; all taps and per trace"},
                         {"double_tap_threshold_us", o.threshold_us}});
}

void select_kernels(const std::string& name) {
  if (name == "auto") return;
  const std::map<std::string, kernels::Backend> names{{"scalar", kernels::Backend::kScalar},
                                                      {"avx2", kernels::Backend::kAvx2},
                                                      {"neon", kernels::Backend::kNeon}};
  const auto it = names.find(name);
  if (it == names.end() || !kernels::select(it->second)) {
    throw Error(ErrorCode::kInvalidConfig, "kernel backend '" + name + "' is not available");
  }
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c == '\n' ? ' ' : c);
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Tap-intent prediction and single-tap latency replay", "quicktap"};
  app.require_subcommand(1);
  app.add_option("--kernels", o.kernels, "Vector kernel backend: auto|scalar|avx2|neon")
      ->capture_default_str();

  const auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  };
  const auto add_threshold = [&](CLI::App* c) {
    c->add_option("--double-tap-threshold-us", o.threshold_us, "Double-tap window (microseconds)")
        ->capture_default_str();
  };
  const auto add_inputs = [&](CLI::App* c, bool need_model) {
    c->add_option("--traces", o.traces, "Trace files or directories of *.jsonl")->required();
    c->add_option("--out-dir", o.out_dir, "Output directory")->required();
    c->add_option("--profile", o.profile, "Expected device profile: laptop|smartphone");
    auto* model = c->add_option("--model", o.model_path, "Model file");
    if (need_model) model->required();
    add_threshold(c);
  };
  const auto add_training = [&](CLI::App* c) {
    add_seed(c);
    c->add_option("--rounds", o.rounds, "Training rounds")->capture_default_str();
    c->add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str();
    c->add_option("--cost-grid", o.cost_grid, "Comma-separated cost values")->capture_default_str();
    c->add_option("--pat", o.pat, "Activation threshold in [0.5, 1)");
    c->add_flag("--tune-pat", o.tune_pat, "Tune PAT on the final round's held-out split");
    c->add_flag("--no-balance", o.no_balance, "Train on unbalanced classes");
    c->add_option("--test-fraction", o.test_fraction, "Held-out share per round")
        ->capture_default_str();
    c->add_option("--solver-tol", o.solver_tol, "Optimality tolerance")->capture_default_str();
    c->add_option("--max-iter", o.max_iter, "Solver iteration limit")->capture_default_str();
  };

  CLI::App* gen = app.add_subcommand("gen", "Generate synthetic labeled traces");
  gen->add_option("--out-dir", o.out_dir, "Output directory")->required();
  gen->add_option("--profile", o.profile, "laptop|smartphone (default smartphone)");
  gen->add_option("--users", o.users, "Simulated users")->capture_default_str();
  gen->add_option("--taps-per-user", o.taps_per_user, "Primary taps per user")->capture_default_str();
  gen->add_option("--single-fraction", o.single_fraction, "Share of single taps")
      ->capture_default_str();
  gen->add_option("--separation", o.separation, "Class separation scale")->capture_default_str();
  gen->add_option("--sampling-hz", o.sampling_hz, "Frame rate (0 = profile default)")
      ->capture_default_str();
  add_seed(gen);
  add_threshold(gen);

  CLI::App* train_cmd = app.add_subcommand("train", "Train a model from traces");
  add_inputs(train_cmd, false);
  add_training(train_cmd);

  CLI::App* eval = app.add_subcommand("eval", "Accuracy vs top-n% confidence tables");
  add_inputs(eval, false);
  add_training(eval);
  eval->add_flag("--within-user", o.within_user, "Train and evaluate one model per trace");
  eval->add_option("--n-grid", o.n_grid, "Comma-separated percentages")->capture_default_str();
  eval->add_option("--mode", o.mode, "pat|half")->capture_default_str();

  CLI::App* replay_cmd = app.add_subcommand("replay", "Replay traces: conventional vs predictive");
  add_inputs(replay_cmd, true);
  replay_cmd->add_option("--pat", o.pat, "Override the model's PAT");
  replay_cmd->add_option("--sensing-us", o.sensing_us, "Sensing latency (microseconds)");
  replay_cmd->add_option("--inference-us", o.inference_us, "Inference latency (microseconds)");

  CLI::App* curve = app.add_subcommand("curve", "ROC tables per top-n% subset");
  add_inputs(curve, true);
  curve->add_option("--n-grid", o.n_grid, "Comma-separated percentages")->capture_default_str();

  CLI::App* export_cmd = app.add_subcommand("export-model", "Re-validate a model and emit a scoring fixture");
  export_cmd->add_option("--model", o.model_path, "Model file")->required();
  export_cmd->add_option("--out-dir", o.out_dir, "Output directory")->required();
  export_cmd->add_option("--fixture-size", o.fixture_size, "Vectors in the fixture")
      ->capture_default_str();
  add_seed(export_cmd);

  CLI::App* stats_cmd = app.add_subcommand("stats", "Mann-Whitney U and Cohen's d per feature");
  add_inputs(stats_cmd, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "error code=usage message=\"" << escape(e.what()) << "\"\n";
    return 2;
  }

  try {
    select_kernels(o.kernels);
    if (gen->parsed()) cmd_gen(o);
    else if (train_cmd->parsed()) cmd_train(o);
    else if (eval->parsed()) cmd_eval(o);
    else if (replay_cmd->parsed()) cmd_replay(o);
    else if (curve->parsed()) cmd_curve(o);
    else if (export_cmd->parsed()) cmd_export_model(o);
    else if (stats_cmd->parsed()) cmd_stats(o);
  } catch (const Error& e) {
    err << "error code=" << error_code_name(e.code()) << " message=\"" << escape(e.what()) << "\"";
    if (e.location()) err << " location=" << *e.location();
    err << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error code=internal message=\"" << escape(e.what()) << "\"\n";
    return 1;
  }
  return 0;
}

}  // namespace quicktap::cli
