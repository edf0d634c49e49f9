// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include "quicktap/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "quicktap/error.hpp"

namespace quicktap {

std::size_t top_n_count(std::size_t total, double n_percent) {
  // Computed as n*total/100 so whole-number percentages of whole counts land
  // exactly on integers before the ceiling.
  const double exact = n_percent * static_cast<double>(total) / 100.0;
  return std::min(total, static_cast<std::size_t>(std::ceil(exact)));
}

std::vector<ScoredTap> top_n_extract(std::span<const ScoredTap> scored, double n_percent) {
  if (!(n_percent > 0.0 && n_percent <= 100.0)) {
    throw Error(ErrorCode::kInvalidConfig, "n_percent must lie in (0, 100]");
  }
  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return confidence_distance(scored[a].s) > confidence_distance(scored[b].s);
  });
  order.resize(top_n_count(scored.size(), n_percent));
  std::sort(order.begin(), order.end());
  std::vector<ScoredTap> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(scored[i]);
  return out;
}

std::vector<CurvePoint> accuracy_curve(std::span<const ScoredTap> scored,
                                       std::span<const double> n_grid, PatMode mode, double pat) {
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (!scored[i].truth) throw Error(ErrorCode::kMissingTruth, "scored tap lacks truth", i);
  }
  const double cut = mode == PatMode::kByHalf ? 0.5 : pat;
  std::vector<CurvePoint> curve;
  curve.reserve(n_grid.size());
  for (double n : n_grid) {
    const std::vector<ScoredTap> subset = top_n_extract(scored, n);
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (const ScoredTap& t : subset) {
      const bool predicted_single = decide(cut, t.s) == Decision::kSingleTapNow;
      const bool truly_single = *t.truth == TapLabel::kSingle;
      if (predicted_single) {
        (truly_single ? tp : fp)++;
      } else {
        (truly_single ? fn : tn)++;
      }
    }
    CurvePoint p;
    p.n_percent = n;
    p.subset_size = subset.size();
    p.accuracy = subset.empty() ? 0.0
                                : static_cast<double>(tp + tn) / static_cast<double>(subset.size());
    p.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    p.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    curve.push_back(p);
  }
  return curve;
}

RocResult roc_auc(std::span<const ScoredTap> scored) {
  std::size_t positives = 0;
  std::size_t negatives = 0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (!scored[i].truth) throw Error(ErrorCode::kMissingTruth, "scored tap lacks truth", i);
    (*scored[i].truth == TapLabel::kSingle ? positives : negatives)++;
  }
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::kMissingClass, "ROC needs both single and double-first taps");
  }

  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scored[a].s > scored[b].s; });

  RocResult result;
  result.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  double prev_tpr = 0.0;
  double prev_fpr = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    const double threshold = scored[order[k]].s;
    // Every tap sharing this score crosses the threshold together.
    for (; k < order.size() && scored[order[k]].s == threshold; ++k) {
      (*scored[order[k]].truth == TapLabel::kSingle ? tp : fp)++;
    }
    const double tpr = static_cast<double>(tp) / static_cast<double>(positives);
    const double fpr = static_cast<double>(fp) / static_cast<double>(negatives);
    result.auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    result.points.push_back({threshold, tpr, fpr});
    prev_tpr = tpr;
    prev_fpr = fpr;
  }
  return result;
}

std::vector<double> default_n_grid() {
  std::vector<double> grid;
  for (int n = 10; n <= 100; n += 10) grid.push_back(n);
  return grid;
}

}  // namespace quicktap
