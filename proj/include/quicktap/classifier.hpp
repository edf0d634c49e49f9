// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quicktap/features.hpp"
#include "quicktap/tap_stream.hpp"

namespace quicktap {

/// Class coding for the logistic model: a score near 1 means "single tap".
inline constexpr int kSingleLabel = 1;
inline constexpr int kDoubleFirstLabel = 0;

inline int label_value(TapLabel label) {
  return label == TapLabel::kSingle ? kSingleLabel : kDoubleFirstLabel;
}

inline constexpr double kDefaultPat = 0.65;

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const double* data() const { return data_.data(); }

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// One training row: standardized features plus its class.
struct Sample {
  std::vector<double> x;
  int label = kSingleLabel;
  int tap_id = 0;

  bool operator==(const Sample&) const = default;
};

struct SolverOptions {
  double tol = 1e-5;
  int max_iter = 1000;  // outer Newton iterations
};

struct L1Solution {
  std::vector<double> w;
  double b = 0.0;
  double objective = 0.0;
  double gap = 0.0;  // final optimality violation
  int iterations = 0;
};

/// Minimizes (1/cost)*|w|_1 + sum_i log(1 + exp(-y_i (w.x_i + b))) with an
/// unpenalized intercept and y in {-1, +1} (label 1 -> +1, label 0 -> -1).
///
/// Proximal Newton: each iteration minimizes the quadratic model of the loss
/// plus the L1 term by cyclic soft-thresholded coordinate descent, then takes
/// an Armijo backtracking step along the result. Stops when the subgradient optimality violation
///   |dL/db|,  |dL/dw_j + sign(w_j)/cost| (w_j != 0),
///   max(0, |dL/dw_j| - 1/cost)           (w_j == 0)
/// is at most opts.tol. Throws ConvergenceError with the final violation if
/// that does not happen within opts.max_iter iterations.
L1Solution solve_l1(const Matrix& rows, std::span<const int> labels, double cost,
                    const SolverOptions& opts = {});

/// The objective solve_l1 minimizes.
double l1_objective(const Matrix& rows, std::span<const int> labels, std::span<const double> w,
                    double b, double cost);

/// Randomly undersamples the majority class down to the minority count.
/// Selected rows keep their input order. Throws Error(kMissingClass) when a
/// class is absent. Only ever apply this to training data.
std::vector<Sample> balance(std::span<const Sample> data, std::uint64_t seed);

struct TrainConfig {
  std::vector<double> cost_grid{0.01, 0.1, 1.0, 10.0, 100.0};
  int cv_folds = 10;
  int rounds = 10;
  bool balance = true;
  std::uint64_t seed = 0;
  double solver_tol = 1e-5;
  int max_iter = 1000;
  double test_fraction = 0.1;
  double pat = kDefaultPat;
  // Pick the smallest PAT with no false-positive single taps on the final
  // round's held-out split instead of using `pat`.
  bool tune_pat = false;

  void validate() const;
};

/// Stratified fold assignment: each class is shuffled with `seed` and dealt
/// round-robin into k folds. Returns the fold index of every row.
std::vector<int> make_folds(std::span<const int> labels, int k, std::uint64_t seed);

struct CvResult {
  double cost = 0.0;
  std::vector<double> mean_accuracy;  // parallel to the cost grid
};

/// Picks the grid cost with the best mean held-out accuracy over
/// config.cv_folds folds seeded by config.seed. Ties go to the smaller cost.
/// Throws Error(kTooFewRows) when a class has fewer rows than folds.
CvResult cross_validate_cost(std::span<const Sample> data, const TrainConfig& config);

struct ModelWeights {
  std::vector<double> w;
  double b = 0.0;
  Scaler scaler;
  FeatureProfile profile;
  double pat = kDefaultPat;

  /// Throws Error(kValidation) if dimensions disagree or pat is outside [0.5, 1).
  void validate() const;
  bool operator==(const ModelWeights&) const = default;
};

struct ScoredTap {
  int tap_id = 0;
  double s = 0.5;
  std::optional<TapLabel> truth;

  bool operator==(const ScoredTap&) const = default;
};

struct RoundReport {
  std::uint64_t seed = 0;
  double cost = 0.0;
  std::vector<double> w;
  double b = 0.0;
  std::size_t train_size = 0;  // after balancing
  std::size_t test_size = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double test_precision = 0.0;
  double test_recall = 0.0;
  std::vector<ScoredTap> held_out;
};

struct TrainMeta {
  std::uint64_t seed = 0;
  double cost = 0.0;
  int rounds = 0;
  std::string dataset_digest;

  bool operator==(const TrainMeta&) const = default;
};

struct TrainReport {
  std::vector<RoundReport> rounds;
  double mean_train_accuracy = 0.0;
  double mean_test_accuracy = 0.0;
  double mean_test_precision = 0.0;
  double mean_test_recall = 0.0;
  TrainMeta meta;

  /// Held-out scores of every round, concatenated in round order.
  std::vector<ScoredTap> pooled_held_out() const;
};

struct TrainResult {
  ModelWeights model;
  TrainReport report;
};

/// Full training pipeline, repeated config.rounds times with derived seeds:
/// stratified train/test split, scaler fit on the training split, balancing,
/// cost selection by cross-validation, final solve. Metrics are averaged over
/// rounds; the returned model is the last round's. Taps with role
/// kDoubleSecond are ignored.
TrainResult train(std::span<const LabeledTap> taps, const FeatureProfile& profile,
                  const TrainConfig& config);

/// Logistic score of a raw (unstandardized) feature vector.
double score(const ModelWeights& model, const FeatureVector& fv);

/// Batch form of score(); runs the vector kernel over all rows at once.
std::vector<double> score_batch(const ModelWeights& model, std::span<const FeatureVector> fvs);

double sigmoid(double logit);

enum class Decision { kSingleTapNow, kWaitForSecondTap };

/// Single tap iff s >= pat. Everything below waits, whether the tap looks
/// like a double or is merely ambiguous.
inline Decision decide(double pat, double s) {
  return s >= pat ? Decision::kSingleTapNow : Decision::kWaitForSecondTap;
}

inline Decision decide(const ModelWeights& model, double s) { return decide(model.pat, s); }

/// Smallest candidate PAT for which no tap with truth kDoubleFirst scores at
/// or above it. Candidates run 0.50, 0.51, ..., 0.99; falls back to 0.99.
double tune_pat(std::span<const ScoredTap> held_out);

/// 64-bit FNV-1a over feature bits and labels, as 16 hex digits.
std::string dataset_digest(std::span<const FeatureVector> rows, std::span<const int> labels);

}  // namespace quicktap
