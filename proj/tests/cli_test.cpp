// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "helpers.hpp"
#include "quicktap/cli.hpp"
#include "quicktap/store.hpp"

using namespace quicktap;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = quicktap::cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

// Small but non-trivial: enough rows per class for 3-fold CV in every round.
void gen(const fs::path& dir, const std::string& profile = "smartphone") {
  const Run r = invoke({"gen", "--out-dir", dir.string(), "--users", "2", "--taps-per-user", "80",
                     "--seed", "5", "--profile", profile});
  REQUIRE_MESSAGE(r.status == 0, r.err);
}

Run train(const fs::path& traces, const fs::path& out) {
  return invoke({"train", "--traces", traces.string(), "--out-dir", out.string(), "--rounds", "2",
              "--folds", "3", "--seed", "5"});
}

}  // namespace

TEST_CASE("gen, train, eval, replay, curve, stats and export-model all succeed") {
  const fs::path dir = quicktap::testing::scratch_dir("cli_pipeline");
  gen(dir / "traces");
  CHECK(fs::exists(dir / "traces" / "user_00.jsonl"));
  CHECK(fs::exists(dir / "traces" / "user_01.jsonl"));
  CHECK(fs::exists(dir / "traces" / "manifest.json"));

  REQUIRE(train(dir / "traces", dir / "model").status == 0);
  const fs::path model = dir / "model" / "model.json";
  CHECK_NOTHROW(read_model(model));
  CHECK(fs::exists(dir / "model" / "train_report.json"));

  Run r = invoke({"eval", "--traces", (dir / "traces").string(), "--model", model.string(),
               "--out-dir", (dir / "eval").string()});
  CHECK_MESSAGE(r.status == 0, r.err);
  CHECK(read_text(dir / "eval" / "accuracy.csv").rfind("n_percent,subset_size,accuracy", 0) == 0);

  r = invoke({"eval", "--traces", (dir / "traces").string(), "--within-user", "--rounds", "2",
           "--folds", "3", "--out-dir", (dir / "eval_wu").string(), "--mode", "half"});
  CHECK_MESSAGE(r.status == 0, r.err);
  CHECK(fs::exists(dir / "eval_wu" / "accuracy_synth-user_00.csv"));
  CHECK(fs::exists(dir / "eval_wu" / "accuracy_mean.csv"));

  r = invoke({"replay", "--traces", (dir / "traces").string(), "--model", model.string(),
           "--out-dir", (dir / "replay").string()});
  CHECK_MESSAGE(r.status == 0, r.err);
  for (const char* f : {"baseline_taps.csv", "baseline_summary.json", "predictive_taps.csv",
                        "predictive_summary.json", "comparison.json", "comparison.txt"}) {
    CHECK(fs::exists(dir / "replay" / f));
  }

  r = invoke({"curve", "--traces", (dir / "traces").string(), "--model", model.string(),
           "--out-dir", (dir / "curve").string(), "--n-grid", "50,100"});
  CHECK_MESSAGE(r.status == 0, r.err);
  CHECK(fs::exists(dir / "curve" / "roc_n100.csv"));

  r = invoke({"stats", "--traces", (dir / "traces").string(), "--out-dir", (dir / "stats").string()});
  CHECK_MESSAGE(r.status == 0, r.err);
  CHECK(read_text(dir / "stats" / "stats.csv").find("all,completion_s,") != std::string::npos);

  r = invoke({"export-model", "--model", model.string(), "--out-dir", (dir / "export").string()});
  CHECK_MESSAGE(r.status == 0, r.err);
  const auto fixture = nlohmann::json::parse(read_text(dir / "export" / "conformance.json"));
  CHECK(fixture["vectors"].size() == 100);
  const ModelFile m = read_model(dir / "export" / "model.json");
  for (const auto& v : fixture["vectors"]) {
    FeatureVector fv{v["values"].get<std::vector<double>>(), 0};
    CHECK(score(m.model, fv) == v["score"].get<double>());
  }

  const auto manifest = nlohmann::json::parse(read_text(dir / "replay" / "manifest.json"));
  CHECK(manifest["subcommand"] == "replay");
  CHECK(manifest["config"]["sensing_us"] == 16600);
  CHECK(manifest["config"]["inference_us"] == 1380);
  CHECK(manifest["artifacts"].size() == 6);
}

TEST_CASE("training twice with the same seed gives byte-identical artifacts") {
  const fs::path dir = quicktap::testing::scratch_dir("cli_determinism");
  gen(dir / "traces");
  REQUIRE(train(dir / "traces", dir / "out").status == 0);
  const std::string model = read_text(dir / "out" / "model.json");
  const std::string report = read_text(dir / "out" / "train_report.json");
  REQUIRE(train(dir / "traces", dir / "out").status == 0);
  CHECK(read_text(dir / "out" / "model.json") == model);
  CHECK(read_text(dir / "out" / "train_report.json") == report);
}

TEST_CASE("replay with PAT 0.99 keeps singles waiting like the baseline") {
  const fs::path dir = quicktap::testing::scratch_dir("cli_pat");
  gen(dir / "traces");
  REQUIRE(train(dir / "traces", dir / "model").status == 0);
  const Run r = invoke({"replay", "--traces", (dir / "traces").string(), "--model",
                     (dir / "model" / "model.json").string(), "--out-dir", (dir / "r").string(),
                     "--pat", "0.99"});
  REQUIRE_MESSAGE(r.status == 0, r.err);
  const auto manifest = nlohmann::json::parse(read_text(dir / "r" / "manifest.json"));
  CHECK(manifest["config"]["pat"] == 0.99);

  // Every tap that waits matches the baseline row for row; only the few
  // slowest singles clear a 0.99 threshold.
  std::istringstream pred(read_text(dir / "r" / "predictive_taps.csv"));
  std::istringstream base(read_text(dir / "r" / "baseline_taps.csv"));
  std::string p, b;
  std::getline(pred, p);
  std::getline(base, b);
  int rows = 0, early = 0;
  const auto tail = [](const std::string& row) {
    // tap_id,score,prediction,truth,cell,fired_kind,emit_t_us,latency_us
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) pos = row.find(',', pos) + 1;
    return row.substr(pos);
  };
  while (std::getline(pred, p) && std::getline(base, b)) {
    ++rows;
    if (tail(p).rfind("A,", 0) == 0 || tail(p).rfind("C,", 0) == 0) {
      ++early;
      continue;
    }
    CHECK(tail(p) == tail(b));
  }
  CHECK(rows > 100);
  CHECK(early * 10 <= rows);
}

TEST_CASE("errors are one machine-readable line with a nonzero status") {
  const fs::path dir = quicktap::testing::scratch_dir("cli_errors");
  Run r = invoke({"replay", "--traces", (dir / "nothing.jsonl").string(), "--model",
               (dir / "m.json").string(), "--out-dir", dir.string()});
  CHECK(r.status == 1);
  CHECK(r.err.rfind("error code=io ", 0) == 0);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);

  r = invoke({"train"});
  CHECK(r.status == 2);
  CHECK(r.err.rfind("error code=usage ", 0) == 0);

  r = invoke({"frobnicate"});
  CHECK(r.status == 2);

  gen(dir / "traces");
  r = invoke({"train", "--traces", (dir / "traces").string(), "--out-dir", (dir / "m").string(),
           "--profile", "laptop"});
  CHECK(r.status == 1);
  CHECK(r.err.rfind("error code=profile_mismatch ", 0) == 0);

  r = invoke({"train", "--traces", (dir / "traces").string(), "--out-dir", (dir / "m").string(),
           "--pat", "1.5"});
  CHECK(r.status == 1);
  CHECK(r.err.rfind("error code=invalid_config ", 0) == 0);

  r = invoke({"--kernels", "bogus", "stats", "--traces", (dir / "traces").string(), "--out-dir",
           (dir / "s").string()});
  CHECK(r.status == 1);
}

TEST_CASE("traces of different profiles cannot be mixed") {
  const fs::path dir = quicktap::testing::scratch_dir("cli_mixed");
  gen(dir / "phone", "smartphone");
  gen(dir / "pad", "laptop");
  const Run r = invoke({"stats", "--traces", (dir / "phone" / "user_00.jsonl").string(), "--traces",
                     (dir / "pad" / "user_00.jsonl").string(), "--out-dir", (dir / "s").string()});
  CHECK(r.status == 1);
  CHECK(r.err.rfind("error code=profile_mismatch ", 0) == 0);
}

TEST_CASE("help exits cleanly") {
  const Run r = invoke({"--help"});
  CHECK(r.status == 0);
  CHECK(r.out.find("replay") != std::string::npos);
}
