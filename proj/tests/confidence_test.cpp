// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "quicktap/confidence.hpp"
#include "quicktap/error.hpp"
#include "quicktap/stats.hpp"

using namespace quicktap;

namespace {

std::vector<ScoredTap> scored_from(const std::vector<double>& s) {
  std::vector<ScoredTap> out;
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back({int(i), s[i], std::nullopt});
  return out;
}

std::vector<int> ids(const std::vector<ScoredTap>& v) {
  std::vector<int> out;
  for (const auto& t : v) out.push_back(t.tap_id);
  return out;
}

}  // namespace

TEST_CASE("confidence distance") {
  CHECK(confidence_distance(0.5) == 0.0);
  CHECK(confidence_distance(0.9) == doctest::Approx(0.4));
  CHECK(confidence_distance(0.1) == doctest::Approx(0.4));
}

TEST_CASE("top-n extraction examples") {
  const auto s = scored_from({0.9, 0.5, 0.1, 0.6});
  CHECK(ids(top_n_extract(s, 50)) == std::vector<int>{0, 2});
  CHECK(ids(top_n_extract(s, 100)) == std::vector<int>{0, 1, 2, 3});
  const auto flat = scored_from(std::vector<double>(8, 0.7));
  CHECK(ids(top_n_extract(flat, 25)) == std::vector<int>{0, 1});
  CHECK(top_n_extract(std::vector<ScoredTap>{}, 30).empty());
}

TEST_CASE("top-n size is the ceiling of n percent") {
  CHECK(top_n_count(10, 10) == 1);
  CHECK(top_n_count(11, 10) == 2);
  CHECK(top_n_count(7, 100) == 7);
  CHECK(top_n_count(100, 30) == 30);
  CHECK(top_n_count(7, 30) == 3);
  CHECK(top_n_count(0, 50) == 0);
}

TEST_CASE("top-n rejects percentages outside (0, 100]") {
  const auto s = scored_from({0.9});
  CHECK_THROWS_AS(top_n_extract(s, 0.0), Error);
  CHECK_THROWS_AS(top_n_extract(s, 100.5), Error);
}

TEST_CASE("top-n matches sort-and-slice on random sets with ties") {
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<int> coarse(0, 10);
  std::uniform_int_distribution<std::size_t> size(0, 60);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> s(size(rng));
    for (double& v : s) v = coarse(rng) / 10.0;  // many equal distances, and mirrored pairs
    const auto scored = scored_from(s);
    for (int n = 5; n <= 100; n += 5) {
      CHECK(top_n_extract(scored, n) == oracle::top_n_sort_slice(scored, n));
    }
  }
}

TEST_CASE("accuracy curve on perfect scores is 1 everywhere") {
  std::vector<ScoredTap> s{{0, 1.0, TapLabel::kSingle},
                           {1, 0.0, TapLabel::kDoubleFirst},
                           {2, 1.0, TapLabel::kSingle},
                           {3, 0.0, TapLabel::kDoubleFirst}};
  const auto grid = default_n_grid();
  for (const CurvePoint& p : accuracy_curve(s, grid, PatMode::kByHalf)) CHECK(p.accuracy == 1.0);
}

TEST_CASE("constant scores give the base rate at n = 100") {
  std::vector<ScoredTap> s;
  for (int i = 0; i < 10; ++i) {
    s.push_back({i, 0.8, i < 7 ? TapLabel::kSingle : TapLabel::kDoubleFirst});
  }
  const std::vector<double> grid{100};
  const auto curve = accuracy_curve(s, grid, PatMode::kByPat, 0.65);
  CHECK(curve[0].accuracy == doctest::Approx(0.7));
  CHECK(curve[0].precision == doctest::Approx(0.7));
  CHECK(curve[0].recall == 1.0);
}

TEST_CASE("accuracy curve matches a from-scratch recount") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ScoredTap> s;
  for (int i = 0; i < 333; ++i) {
    const bool single = u(rng) < 0.5;
    const double noise = u(rng);
    s.push_back({i, single ? 0.3 + 0.7 * noise : 0.7 * noise,
                 single ? TapLabel::kSingle : TapLabel::kDoubleFirst});
  }
  const auto grid = default_n_grid();
  for (PatMode mode : {PatMode::kByHalf, PatMode::kByPat}) {
    const auto curve = accuracy_curve(s, grid, mode, 0.7);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto subset = oracle::top_n_sort_slice(s, grid[k]);
      const double cut = mode == PatMode::kByHalf ? 0.5 : 0.7;
      int tp = 0, fp = 0, tn = 0, fn = 0;
      for (const auto& t : subset) {
        const bool pred = t.s >= cut;
        const bool truth = *t.truth == TapLabel::kSingle;
        (pred ? (truth ? tp : fp) : (truth ? fn : tn))++;
      }
      CHECK(curve[k].subset_size == subset.size());
      CHECK(curve[k].accuracy == doctest::Approx(double(tp + tn) / subset.size()));
      CHECK(curve[k].precision == doctest::Approx(tp + fp ? double(tp) / (tp + fp) : 0.0));
      CHECK(curve[k].recall == doctest::Approx(tp + fn ? double(tp) / (tp + fn) : 0.0));
    }
  }
}

TEST_CASE("accuracy curve requires truth") {
  const auto s = scored_from({0.9, 0.1});
  const auto grid = default_n_grid();
  try {
    accuracy_curve(s, grid, PatMode::kByHalf);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingTruth);
  }
}

TEST_CASE("ROC examples") {
  std::vector<ScoredTap> four{{0, 0.9, TapLabel::kSingle},
                              {1, 0.6, TapLabel::kSingle},
                              {2, 0.4, TapLabel::kDoubleFirst},
                              {3, 0.7, TapLabel::kDoubleFirst}};
  const RocResult r = roc_auc(four);
  CHECK(r.auc == doctest::Approx(0.75));
  CHECK(oracle::pairwise_auc(four) == 0.75);
  CHECK(std::isinf(r.points.front().threshold));
  CHECK(r.points.front().tpr == 0.0);
  CHECK(r.points.front().fpr == 0.0);
  CHECK(r.points.back().tpr == 1.0);
  CHECK(r.points.back().fpr == 1.0);

  for (auto& t : four) t.s = 0.4;
  CHECK(roc_auc(four).auc == doctest::Approx(0.5));

  std::vector<ScoredTap> perfect{{0, 0.9, TapLabel::kSingle}, {1, 0.1, TapLabel::kDoubleFirst}};
  CHECK(roc_auc(perfect).auc == 1.0);

  std::vector<ScoredTap> one_class{{0, 0.9, TapLabel::kSingle}};
  CHECK_THROWS_AS(roc_auc(one_class), Error);
}

TEST_CASE("AUC equals pair counting and U / (n1 n2) on tied random sets") {
  std::mt19937_64 rng(90);
  std::uniform_int_distribution<int> level(0, 20);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ScoredTap> s;
    std::vector<double> singles;
    std::vector<double> doubles;
    for (int i = 0; i < 40; ++i) {
      const bool single = i % 3 != 0;
      const double v = (level(rng) + (single ? 4 : 0)) / 25.0;
      s.push_back({i, v, single ? TapLabel::kSingle : TapLabel::kDoubleFirst});
      (single ? singles : doubles).push_back(v);
    }
    const double auc = roc_auc(s).auc;
    CHECK(auc == doctest::Approx(oracle::pairwise_auc(s)).epsilon(1e-12));
    const UTestResult u = mann_whitney_u(singles, doubles);
    CHECK(std::abs(auc - u.u / double(singles.size() * doubles.size())) <= 1e-9);
  }
}
