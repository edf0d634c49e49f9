// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "quicktap/error.hpp"
#include "quicktap/features.hpp"

using namespace quicktap;
using quicktap::testing::add_tap;
using quicktap::testing::us;

TEST_CASE("profile names round-trip") {
  CHECK(parse_profile(profile_name(DeviceProfile::kLaptop)) == DeviceProfile::kLaptop);
  CHECK(parse_profile(profile_name(DeviceProfile::kSmartphone)) == DeviceProfile::kSmartphone);
  CHECK_FALSE(parse_profile("tablet").has_value());
}

TEST_CASE("laptop features in profile order") {
  std::vector<TouchSample> s;
  add_tap(s, 0, 200'000, 0.2, 0.6, 3.0, 0.02, -0.01, PowerSource::kBattery);
  const TapRecord tap = TapRecord::from_samples(4, s);
  const auto profile = FeatureProfile::for_device(DeviceProfile::kLaptop);
  REQUIRE(profile.size() == 11);
  const FeatureVector fv = extract(tap, profile);
  REQUIRE(fv.values.size() == 11);
  CHECK(fv.tap_id == 4);
  CHECK(fv.values[0] == doctest::Approx(0.2));
  CHECK(fv.values[1] == doctest::Approx(3.0));
  CHECK(fv.values[2] == doctest::Approx(0.1));    // 0.02 / 0.2 s
  CHECK(fv.values[3] == doctest::Approx(-0.05));
  CHECK(fv.values[4] == doctest::Approx(0.02));
  CHECK(fv.values[5] == doctest::Approx(-0.01));
  CHECK(fv.values[6] == doctest::Approx(0.2));
  CHECK(fv.values[7] == doctest::Approx(0.6));
  CHECK(fv.values[8] == doctest::Approx(0.22));
  CHECK(fv.values[9] == doctest::Approx(0.59));
  CHECK(fv.values[10] == 1.0);
}

TEST_CASE("smartphone profile keeps completion and contact size only") {
  std::vector<TouchSample> s;
  add_tap(s, 0, 90'000, 0.2, 0.6, 1.5);
  const auto fv = extract(TapRecord::from_samples(0, s),
                          FeatureProfile::for_device(DeviceProfile::kSmartphone));
  REQUIRE(fv.values.size() == 2);
  CHECK(fv.values[0] == doctest::Approx(0.09));
  CHECK(fv.values[1] == doctest::Approx(1.5));
}

TEST_CASE("zero-duration tap has zero velocity") {
  std::vector<TouchSample> s{{us(5), 0.1, 0.1, 1.0, Phase::kDown, PowerSource::kAC},
                             {us(5), 0.11, 0.1, 1.0, Phase::kUp, PowerSource::kAC}};
  const auto fv = extract(TapRecord::from_samples(0, s),
                          FeatureProfile::for_device(DeviceProfile::kLaptop));
  CHECK(fv.values[2] == 0.0);
  CHECK(fv.values[3] == 0.0);
  CHECK(std::isfinite(fv.values[4]));
}

TEST_CASE("scaler uses population statistics and maps constant columns to zero") {
  std::vector<FeatureVector> rows{{{1.0, 5.0}, 0}, {{3.0, 5.0}, 1}};
  const Scaler sc = standardize_fit(rows);
  CHECK(sc.means == std::vector<double>{2.0, 5.0});
  CHECK(sc.stds[0] == doctest::Approx(1.0));
  CHECK(sc.stds[1] == 0.0);
  const auto z = standardize_apply(sc, rows[0]);
  CHECK(z.values[0] == doctest::Approx(-1.0));
  CHECK(z.values[1] == 0.0);
  CHECK(z.tap_id == 0);
}

TEST_CASE("standardized training columns have mean 0 and population std 1") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(4.0, 2.5);
  std::vector<FeatureVector> rows;
  for (int i = 0; i < 257; ++i) rows.push_back({{n(rng), n(rng), n(rng)}, i});
  const Scaler sc = standardize_fit(rows);
  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0.0;
    double sq = 0.0;
    for (const auto& r : rows) mean += standardize_apply(sc, r).values[j];
    mean /= static_cast<double>(rows.size());
    for (const auto& r : rows) {
      const double v = standardize_apply(sc, r).values[j];
      sq += (v - mean) * (v - mean);
    }
    CHECK(std::abs(mean) < 1e-12);
    CHECK(std::sqrt(sq / static_cast<double>(rows.size())) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("scaler errors") {
  CHECK_THROWS_AS(standardize_fit(std::vector<FeatureVector>{}), Error);
  const Scaler sc{{0.0, 0.0}, {1.0, 1.0}};
  try {
    standardize_apply(sc, FeatureVector{{1.0}, 0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
}
