// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

// Small hand-checked cases across modules.

#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "quicktap/classifier.hpp"
#include "quicktap/error.hpp"
#include "quicktap/features.hpp"
#include "quicktap/synth.hpp"
#include "quicktap/stats.hpp"

using namespace quicktap;
using quicktap::testing::make_tap;
using quicktap::testing::us;

TEST_CASE("segmentation by hand") {
  std::vector<TouchSample> one{{us(0), 0.4, 0.4, 1.0, Phase::kDown, PowerSource::kAC},
                               {us(100'000), 0.4, 0.4, 1.0, Phase::kUp, PowerSource::kAC}};
  const auto taps = segment_taps(one);
  REQUIRE(taps.size() == 1);
  CHECK(taps[0].completion == us(100'000));

  std::vector<TouchSample> slow{{us(0), 0.4, 0.4, 1.0, Phase::kDown, PowerSource::kAC},
                                {us(700'000), 0.4, 0.4, 1.0, Phase::kUp, PowerSource::kAC}};
  CHECK(segment_taps(slow).empty());

  std::vector<TouchSample> two{{us(0), 0.4, 0.4, 1.0, Phase::kDown, PowerSource::kAC},
                               {us(80'000), 0.4, 0.4, 1.0, Phase::kUp, PowerSource::kAC},
                               {us(200'000), 0.4, 0.4, 1.0, Phase::kDown, PowerSource::kAC},
                               {us(280'000), 0.4, 0.4, 1.0, Phase::kUp, PowerSource::kAC}};
  const auto pair = segment_taps(two);
  REQUIRE(pair.size() == 2);
  CHECK(pair[0].id == 0);
  CHECK(pair[1].id == 1);
  CHECK(segment_taps(std::vector<TouchSample>{}).empty());
}

TEST_CASE("labeling by hand") {
  auto labels = [](std::vector<long long> downs) {
    std::vector<TapRecord> taps;
    for (std::size_t i = 0; i < downs.size(); ++i) taps.push_back(make_tap(int(i), downs[i], 50'000));
    std::vector<std::pair<TapLabel, TapRole>> out;
    for (const auto& lt : label_taps(taps)) out.emplace_back(lt.label, lt.role);
    return out;
  };
  using P = std::pair<TapLabel, TapRole>;
  const P first{TapLabel::kDoubleFirst, TapRole::kPrimary};
  const P second{TapLabel::kSingle, TapRole::kDoubleSecond};
  const P single{TapLabel::kSingle, TapRole::kPrimary};
  CHECK(labels({0, 350'000}) == std::vector<P>{first, second});                 // gap 300 ms
  CHECK(labels({0, 650'000}) == std::vector<P>{single, single});                // gap 600 ms
  CHECK(labels({0, 250'000, 500'000}) == std::vector<P>{first, second, single});  // 200, 200 ms
  CHECK(label_taps({}).empty());
}

TEST_CASE("conventional detector by hand") {
  const std::vector<TapRecord> isolated{make_tap(0, 0, 100'000)};
  const auto single = conventional_detect(isolated);
  REQUIRE(single.size() == 1);
  CHECK(single[0].kind == DetectorEventKind::kSingleTapFired);
  CHECK(single[0].emit_t == us(600'000));

  const std::vector<TapRecord> pair{make_tap(0, 0, 100'000), make_tap(1, 250'000, 100'000)};
  const auto dbl = conventional_detect(pair);
  REQUIRE(dbl.size() == 1);
  CHECK(dbl[0].kind == DetectorEventKind::kDoubleTapFired);
  CHECK(dbl[0].emit_t == us(350'000));
  CHECK(conventional_detect(std::vector<TapRecord>{}).empty());
}

TEST_CASE("features by hand") {
  std::vector<TouchSample> s{{us(0), 0.20, 0.30, 1.0, Phase::kDown, PowerSource::kAC},
                             {us(100'000), 0.26, 0.38, 1.0, Phase::kUp, PowerSource::kAC}};
  const auto fv = extract(TapRecord::from_samples(0, s), FeatureProfile::for_device(DeviceProfile::kLaptop));
  CHECK(fv.values[0] == doctest::Approx(0.1));
  CHECK(fv.values[4] == doctest::Approx(0.06));
  CHECK(fv.values[5] == doctest::Approx(0.08));
  CHECK(fv.values[2] == doctest::Approx(0.6));
  CHECK(fv.values[3] == doctest::Approx(0.8));
  CHECK(fv.values[10] == 0.0);

  std::vector<TouchSample> still{{us(0), 0.5, 0.5, 1.0, Phase::kDown, PowerSource::kAC},
                                 {us(50'000), 0.5, 0.5, 1.0, Phase::kUp, PowerSource::kAC}};
  const auto z = extract(TapRecord::from_samples(0, still), FeatureProfile::for_device(DeviceProfile::kLaptop));
  CHECK(z.values[2] == 0.0);
  CHECK(z.values[3] == 0.0);
  CHECK(z.values[4] == 0.0);
  CHECK(z.values[5] == 0.0);
}

TEST_CASE("scaler by hand") {
  const std::vector<FeatureVector> one{{{3.0, -1.0}, 0}};
  const Scaler s1 = standardize_fit(one);
  CHECK(s1.means == std::vector<double>{3.0, -1.0});
  CHECK(s1.stds == std::vector<double>{0.0, 0.0});

  const Scaler sc{{2.0}, {1.0}};
  CHECK(standardize_apply(sc, {{4.0}, 0}).values[0] == 2.0);
  CHECK(standardize_apply(sc, {{2.0}, 0}).values[0] == 0.0);
  CHECK(standardize_apply(Scaler{{2.0}, {0.0}}, {{9.0}, 0}).values[0] == 0.0);
}

TEST_CASE("balance by hand") {
  std::vector<Sample> data;
  for (int i = 0; i < 120; ++i) data.push_back({{double(i)}, i < 100 ? 1 : 0, i});
  const auto out = balance(data, 1);
  CHECK(out.size() == 40);
  CHECK(std::count_if(out.begin(), out.end(), [](const Sample& s) { return s.label == 0; }) == 20);

  std::vector<Sample> even(data.begin() + 80, data.end());
  CHECK(balance(even, 1).size() == even.size());
}

TEST_CASE("solver limits by hand") {
  // mirror-image classes: the intercept stays at zero
  const Matrix mirror = Matrix::from_rows({{1.0, 2.0}, {2.0, 0.5}, {-1.0, -2.0}, {-2.0, -0.5}});
  const std::vector<int> ym{1, 1, 0, 0};
  CHECK(std::abs(solve_l1(mirror, ym, 1.0, {1e-9, 1000}).b) <= 1e-8);

  // one feature, strong penalty: the weight is driven to zero
  const Matrix line = Matrix::from_rows({{-1.0}, {1.0}});
  const std::vector<int> yl{0, 1};
  CHECK(solve_l1(line, yl, 0.1).w[0] == 0.0);
  CHECK(solve_l1(line, yl, 10.0).w[0] > 0.0);
}

TEST_CASE("cost selection by hand") {
  std::vector<Sample> data;
  for (int i = 0; i < 400; ++i) {
    const double mag = 1.0 + (i % 3);
    data.push_back({{i % 2 ? mag : -mag}, i % 2 ? kSingleLabel : kDoubleFirstLabel, i});
  }
  TrainConfig cfg;
  cfg.cv_folds = 4;
  cfg.cost_grid = {10.0, 0.5, 1.0};
  const CvResult cv = cross_validate_cost(data, cfg);
  CHECK(cv.mean_accuracy == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(cv.cost == 0.5);

  cfg.cost_grid = {3.0};
  CHECK(cross_validate_cost(data, cfg).cost == 3.0);
}

TEST_CASE("clearly separated synthetic taps are fit perfectly in every round") {
  SynthConfig sc;
  sc.users = 1;
  sc.taps_per_user = 200;
  sc.completion_sigma = 0.08;
  sc.user_completion_log_sd = 0.0;
  sc.seed = 4;
  const auto taps = generate(sc)[0].taps;
  TrainConfig cfg;
  cfg.rounds = 3;
  cfg.cv_folds = 5;
  const TrainResult r = train(taps, FeatureProfile::for_device(DeviceProfile::kSmartphone), cfg);
  for (const RoundReport& round : r.report.rounds) CHECK(round.train_accuracy == 1.0);

  cfg.rounds = 1;
  const auto a = train(taps, FeatureProfile::for_device(DeviceProfile::kSmartphone), cfg).model;
  const auto b = train(taps, FeatureProfile::for_device(DeviceProfile::kSmartphone), cfg).model;
  CHECK(a == b);
}

TEST_CASE("scores and decisions by hand") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-15));

  ModelWeights m;
  m.profile = FeatureProfile::for_device(DeviceProfile::kSmartphone);
  m.w = {0.7, -1.3};
  m.b = 0.2;
  m.scaler = {{0.1, 1.0}, {0.05, 0.1}};
  ModelWeights neg = m;
  neg.w = {-0.7, 1.3};
  neg.b = -0.2;
  const FeatureVector fv{{0.13, 1.07}, 0};
  CHECK(score(neg, fv) == doctest::Approx(1.0 - score(m, fv)).epsilon(1e-14));

  CHECK(decide(0.7, 0.75) == Decision::kSingleTapNow);
  CHECK(decide(0.7, 0.65) == Decision::kWaitForSecondTap);
  CHECK(decide(0.7, 0.7) == Decision::kSingleTapNow);
}

TEST_CASE("effect sizes by hand") {
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{4, 3, 2, 1};
  CHECK(cohens_d(a, b).d == 0.0);
  CHECK(descriptor_name(cohens_d(a, b).descriptor) == "Very Small");
  CHECK(descriptor_name(describe_effect(0.607)) == "Medium");
}
