// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "quicktap/classifier.hpp"

namespace quicktap {

/// How far a score sits from the undecided midpoint: |s - 0.5|.
inline double confidence_distance(double s) { return s >= 0.5 ? s - 0.5 : 0.5 - s; }

/// Number of items kept for a top-n% cut of `total` items: ceil(n/100 * total).
std::size_t top_n_count(std::size_t total, double n_percent);

/// The top_n_count() items farthest from 0.5. Ties on distance keep the
/// lower original index; the result keeps input order. Throws
/// Error(kInvalidConfig) unless 0 < n_percent <= 100.
std::vector<ScoredTap> top_n_extract(std::span<const ScoredTap> scored, double n_percent);

struct CurvePoint {
  double n_percent = 0.0;
  std::size_t subset_size = 0;
  double accuracy = 0.0;
  double precision = 0.0;  // of single-tap predictions; 0 when none
  double recall = 0.0;     // of true single taps; 0 when none

  bool operator==(const CurvePoint&) const = default;
};

enum class PatMode {
  kByHalf,  // single iff s >= 0.5
  kByPat,   // single iff decide(pat, s) is kSingleTapNow
};

/// Accuracy, precision and recall over each top-n% subset. Throws
/// Error(kMissingTruth) if any tap lacks a truth label.
std::vector<CurvePoint> accuracy_curve(std::span<const ScoredTap> scored,
                                       std::span<const double> n_grid, PatMode mode,
                                       double pat = kDefaultPat);

struct RocPoint {
  double threshold = 0.0;  // +inf for the (0, 0) anchor
  double tpr = 0.0;
  double fpr = 0.0;
};

struct RocResult {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// ROC over the distinct scores, single taps as the positive class, AUC by
/// the trapezoidal rule. Throws Error(kMissingClass) on single-class truth,
/// kMissingTruth on unlabeled taps.
RocResult roc_auc(std::span<const ScoredTap> scored);

/// 10, 20, ..., 100.
std::vector<double> default_n_grid();

}  // namespace quicktap
