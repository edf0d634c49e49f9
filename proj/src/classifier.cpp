// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include "quicktap/classifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

#include "quicktap/error.hpp"
#include "quicktap/kernels.hpp"
#include "quicktap/random.hpp"

namespace quicktap {

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

constexpr double kArmijo = 0.01;
constexpr int kMaxBacktracks = 40;
constexpr int kMaxInnerSweeps = 10000;

// State of one solve. Each outer iteration builds the second-order model of
// the logistic loss over (b, w), minimizes model + L1 term by cyclic
// soft-thresholded coordinate descent, then backtracks along that direction
// on the true objective. The model is only (d+1)x(d+1), so nearly collinear
// columns cost inner sweeps rather than passes over the data.
class CoordinateDescent {
 public:
  CoordinateDescent(const Matrix& rows, std::span<const int> labels, double cost)
      : n_(rows.rows()), d_(rows.cols() + 1), lambda_(1.0 / cost) {
    // column 0 is the intercept
    columns_.assign(d_, std::vector<double>(n_, 1.0));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 1; j < d_; ++j) columns_[j][i] = rows.at(i, j - 1);
    }
    y_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) y_[i] = labels[i] == kSingleLabel ? 1.0 : -1.0;
    theta_.assign(d_, 0.0);
    penalty_.assign(d_, lambda_);
    penalty_[0] = 0.0;
    margin_.assign(n_, 0.0);
    loss_.resize(n_);
    residual_.resize(n_);
    curvature_.resize(n_);
    trial_.resize(n_);
    weighted_.resize(n_);
    grad_.resize(d_);
    hess_.assign(d_ * d_, 0.0);
    refresh();
  }

  int run(const SolverOptions& opts) {
    gap_ = violation();
    if (gap_ <= opts.tol) return 0;
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
      build_model();
      const std::vector<double> dir = solve_model(opts.tol);
      if (!line_search(dir)) break;
      gap_ = violation();
      if (gap_ <= opts.tol) return iter;
    }
    char msg[160];
    std::snprintf(msg, sizeof msg, "L1 solver did not converge in %d iterations (gap %.3e > tol %.3e)",
                  opts.max_iter, gap_, opts.tol);
    throw ConvergenceError(msg, gap_, opts.max_iter);
  }

  std::vector<double> weights() const { return {theta_.begin() + 1, theta_.end()}; }
  double intercept() const { return theta_[0]; }
  double gap() const { return gap_; }

  double objective() const { return penalty_term(theta_) + loss_sum(); }

 private:
  double loss_sum() const { return std::accumulate(loss_.begin(), loss_.end(), 0.0); }

  double penalty_term(const std::vector<double>& theta) const {
    double total = 0.0;
    for (std::size_t j = 1; j < d_; ++j) total += std::abs(theta[j]);
    return lambda_ * total;
  }

  void refresh() {
    for (std::size_t i = 0; i < n_; ++i) {
      const double ym = y_[i] * margin_[i];
      loss_[i] = softplus(-ym);
      // sigma(-ym), computed on the stable side
      const double p = ym >= 0.0 ? std::exp(-ym) / (1.0 + std::exp(-ym)) : 1.0 / (1.0 + std::exp(ym));
      residual_[i] = -y_[i] * p;
      curvature_[i] = p * (1.0 - p);
    }
    for (std::size_t j = 0; j < d_; ++j) grad_[j] = kernels::dot(columns_[j], residual_);
  }

  void build_model() {
    for (std::size_t k = 0; k < d_; ++k) {
      for (std::size_t i = 0; i < n_; ++i) weighted_[i] = curvature_[i] * columns_[k][i];
      for (std::size_t j = 0; j <= k; ++j) {
        const double v = kernels::dot(columns_[j], weighted_);
        hess_[j * d_ + k] = v;
        hess_[k * d_ + j] = v;
      }
      hess_[k * d_ + k] = std::max(hess_[k * d_ + k], 1e-12);
    }
  }

  // Minimizes grad.z + z'Hz/2 + sum penalty_j |theta_j + z_j| over z.
  std::vector<double> solve_model(double tol) const {
    std::vector<double> z(d_, 0.0);
    std::vector<double> hz(d_, 0.0);
    for (int sweep = 0; sweep < kMaxInnerSweeps; ++sweep) {
      double largest = 0.0;
      for (std::size_t j = 0; j < d_; ++j) {
        const double h = hess_[j * d_ + j];
        const double g = grad_[j] + hz[j];  // model gradient at z, coordinate j
        const double value = theta_[j] + z[j];
        const double lambda = penalty_[j];
        double step;
        if (g + lambda <= h * value) {
          step = -(g + lambda) / h;
        } else if (g - lambda >= h * value) {
          step = -(g - lambda) / h;
        } else {
          step = -value;
        }
        if (step == 0.0) continue;
        z[j] += step;
        kernels::axpy(step, std::span<const double>(hess_).subspan(j * d_, d_), hz);
        largest = std::max(largest, std::abs(step) * std::sqrt(h));
      }
      if (largest <= 1e-3 * tol) break;
    }
    return z;
  }

  bool line_search(const std::vector<double>& dir) {
    double predicted = 0.0;
    for (std::size_t j = 0; j < d_; ++j) predicted += grad_[j] * dir[j];
    std::vector<double> next(d_);
    const auto moved = [&](double step) {
      for (std::size_t j = 0; j < d_; ++j) next[j] = theta_[j] + step * dir[j];
    };
    moved(1.0);
    const double old_penalty = penalty_term(theta_);
    predicted += penalty_term(next) - old_penalty;
    if (predicted >= 0.0) return false;

    const double old_loss = loss_sum();
    double step = 1.0;
    for (int tries = 0; tries < kMaxBacktracks; ++tries, step *= 0.5) {
      moved(step);
      std::copy(margin_.begin(), margin_.end(), trial_.begin());
      for (std::size_t j = 0; j < d_; ++j) {
        if (dir[j] != 0.0) kernels::axpy(step * dir[j], columns_[j], trial_);
      }
      double diff = penalty_term(next) - old_penalty;
      for (std::size_t i = 0; i < n_; ++i) diff += softplus(-y_[i] * trial_[i]);
      diff -= old_loss;
      // Near the optimum the difference is at rounding level; accept the
      // full Newton step there rather than backtracking on noise.
      const bool noise = std::abs(predicted) <= 1e-12 * (1.0 + old_loss);
      if (diff <= kArmijo * step * predicted || (noise && step == 1.0)) {
        theta_ = next;
        std::swap(margin_, trial_);
        refresh();
        return true;
      }
    }
    return false;
  }

  double violation() const {
    double worst = std::abs(grad_[0]);
    for (std::size_t j = 1; j < d_; ++j) {
      const double g = grad_[j];
      double v;
      if (theta_[j] > 0.0) {
        v = std::abs(g + lambda_);
      } else if (theta_[j] < 0.0) {
        v = std::abs(g - lambda_);
      } else {
        v = std::max(0.0, std::abs(g) - lambda_);
      }
      worst = std::max(worst, v);
    }
    return worst;
  }

  std::size_t n_;
  std::size_t d_;  // features plus the intercept
  double lambda_;
  std::vector<std::vector<double>> columns_;
  std::vector<double> y_;
  std::vector<double> theta_;    // intercept then weights
  std::vector<double> penalty_;  // per coordinate, 0 for the intercept
  std::vector<double> margin_;
  std::vector<double> loss_;
  std::vector<double> residual_;
  std::vector<double> curvature_;
  std::vector<double> trial_;
  std::vector<double> weighted_;
  std::vector<double> grad_;
  std::vector<double> hess_;  // row-major (d+1)x(d+1)
  double gap_ = 0.0;
};

Matrix matrix_of(std::span<const Sample> data, std::span<const std::size_t> index) {
  const std::size_t cols = data.empty() ? 0 : data.front().x.size();
  Matrix m(index.size(), cols);
  for (std::size_t r = 0; r < index.size(); ++r) {
    std::copy(data[index[r]].x.begin(), data[index[r]].x.end(), m.row(r).begin());
  }
  return m;
}

double logit_of(std::span<const double> w, double b, std::span<const double> x) {
  return b + kernels::dot(w, x);
}

struct BinaryCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  void add(bool predicted_single, bool truly_single) {
    if (predicted_single) {
      (truly_single ? tp : fp)++;
    } else {
      (truly_single ? fn : tn)++;
    }
  }
  double accuracy() const {
    const std::size_t total = tp + fp + tn + fn;
    return total == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total);
  }
  double precision() const {
    return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  double recall() const {
    return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
};

void require_both_classes(std::span<const int> labels) {
  const bool has_single = std::find(labels.begin(), labels.end(), kSingleLabel) != labels.end();
  const bool has_double =
      std::find(labels.begin(), labels.end(), kDoubleFirstLabel) != labels.end();
  if (!has_single || !has_double) {
    throw Error(ErrorCode::kMissingClass,
                std::string("training data has no ") + (has_single ? "double-first" : "single") +
                    " taps");
  }
}

}  // namespace

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) {
      throw Error(ErrorCode::kDimensionMismatch, "ragged matrix rows", r);
    }
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

double sigmoid(double logit) {
  if (logit >= 0.0) return 1.0 / (1.0 + std::exp(-logit));
  const double e = std::exp(logit);
  return e / (1.0 + e);
}

L1Solution solve_l1(const Matrix& rows, std::span<const int> labels, double cost,
                    const SolverOptions& opts) {
  if (!(cost > 0.0)) throw Error(ErrorCode::kInvalidConfig, "cost must be positive");
  if (labels.size() != rows.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "label count differs from row count");
  }
  if (rows.rows() == 0) throw Error(ErrorCode::kEmptyInput, "no training rows");
  CoordinateDescent cd(rows, labels, cost);
  L1Solution out;
  out.iterations = cd.run(opts);
  out.w = cd.weights();
  out.b = cd.intercept();
  out.gap = cd.gap();
  out.objective = cd.objective();
  return out;
}

double l1_objective(const Matrix& rows, std::span<const int> labels, std::span<const double> w,
                    double b, double cost) {
  double total = 0.0;
  for (double v : w) total += std::abs(v) / cost;
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    const double y = labels[i] == kSingleLabel ? 1.0 : -1.0;
    total += softplus(-y * logit_of(w, b, rows.row(i)));
  }
  return total;
}

std::vector<Sample> balance(std::span<const Sample> data, std::uint64_t seed) {
  std::vector<std::size_t> singles;
  std::vector<std::size_t> doubles;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (data[i].label == kSingleLabel ? singles : doubles).push_back(i);
  }
  if (singles.empty() || doubles.empty()) {
    throw Error(ErrorCode::kMissingClass, "cannot balance: one class is absent");
  }
  std::vector<std::size_t>& majority = singles.size() >= doubles.size() ? singles : doubles;
  const std::size_t keep = std::min(singles.size(), doubles.size());
  std::mt19937_64 rng(seed);
  std::shuffle(majority.begin(), majority.end(), rng);
  majority.resize(keep);

  std::vector<std::size_t> chosen(singles);
  chosen.insert(chosen.end(), doubles.begin(), doubles.end());
  std::sort(chosen.begin(), chosen.end());
  std::vector<Sample> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) out.push_back(data[i]);
  return out;
}

void TrainConfig::validate() const {
  if (cost_grid.empty()) throw Error(ErrorCode::kInvalidConfig, "cost grid is empty");
  for (double c : cost_grid) {
    if (!(c > 0.0)) throw Error(ErrorCode::kInvalidConfig, "cost grid values must be positive");
  }
  if (cv_folds < 2) throw Error(ErrorCode::kInvalidConfig, "cv_folds must be at least 2");
  if (rounds < 1) throw Error(ErrorCode::kInvalidConfig, "rounds must be at least 1");
  if (!(solver_tol > 0.0)) throw Error(ErrorCode::kInvalidConfig, "solver_tol must be positive");
  if (max_iter < 1) throw Error(ErrorCode::kInvalidConfig, "max_iter must be positive");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "test_fraction must lie in (0, 1)");
  }
  if (!(pat >= 0.5 && pat < 1.0)) throw Error(ErrorCode::kInvalidConfig, "pat must lie in [0.5, 1)");
}

std::vector<int> make_folds(std::span<const int> labels, int k, std::uint64_t seed) {
  std::vector<int> fold(labels.size(), 0);
  std::mt19937_64 rng(seed);
  for (int cls : {kSingleLabel, kDoubleFirstLabel}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) idx.push_back(i);
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t r = 0; r < idx.size(); ++r) fold[idx[r]] = static_cast<int>(r % k);
  }
  return fold;
}

CvResult cross_validate_cost(std::span<const Sample> data, const TrainConfig& config) {
  config.validate();
  std::vector<int> labels;
  labels.reserve(data.size());
  for (const Sample& s : data) labels.push_back(s.label);
  const auto per_class = [&](int cls) { return std::count(labels.begin(), labels.end(), cls); };
  if (per_class(kSingleLabel) < config.cv_folds || per_class(kDoubleFirstLabel) < config.cv_folds) {
    throw Error(ErrorCode::kTooFewRows,
                "cross-validation needs at least " + std::to_string(config.cv_folds) +
                    " rows per class");
  }

  CvResult result;
  if (config.cost_grid.size() == 1) {
    result.cost = config.cost_grid.front();
    result.mean_accuracy.assign(1, std::numeric_limits<double>::quiet_NaN());
    return result;
  }
  const std::vector<int> fold = make_folds(labels, config.cv_folds, config.seed);
  const SolverOptions opts{config.solver_tol, config.max_iter};
  result.mean_accuracy.assign(config.cost_grid.size(), 0.0);

  for (std::size_t c = 0; c < config.cost_grid.size(); ++c) {
    double acc_sum = 0.0;
    for (int f = 0; f < config.cv_folds; ++f) {
      std::vector<std::size_t> train_idx;
      std::vector<std::size_t> test_idx;
      for (std::size_t i = 0; i < data.size(); ++i) {
        (fold[i] == f ? test_idx : train_idx).push_back(i);
      }
      std::vector<int> train_labels;
      for (std::size_t i : train_idx) train_labels.push_back(labels[i]);
      const L1Solution sol =
          solve_l1(matrix_of(data, train_idx), train_labels, config.cost_grid[c], opts);
      std::size_t correct = 0;
      for (std::size_t i : test_idx) {
        const bool predicted_single = logit_of(sol.w, sol.b, data[i].x) >= 0.0;
        if (predicted_single == (labels[i] == kSingleLabel)) ++correct;
      }
      acc_sum += static_cast<double>(correct) / static_cast<double>(test_idx.size());
    }
    result.mean_accuracy[c] = acc_sum / config.cv_folds;
  }

  std::size_t best = 0;
  for (std::size_t c = 1; c < config.cost_grid.size(); ++c) {
    const double a = result.mean_accuracy[c];
    const double b = result.mean_accuracy[best];
    if (a > b + 1e-12 || (std::abs(a - b) <= 1e-12 && config.cost_grid[c] < config.cost_grid[best])) {
      best = c;
    }
  }
  result.cost = config.cost_grid[best];
  return result;
}

void ModelWeights::validate() const {
  if (w.size() != profile.size()) {
    throw Error(ErrorCode::kValidation, "weight count " + std::to_string(w.size()) +
                                            " differs from profile feature count " +
                                            std::to_string(profile.size()));
  }
  if (scaler.means.size() != w.size() || scaler.stds.size() != w.size()) {
    throw Error(ErrorCode::kValidation, "scaler dimension differs from weight count");
  }
  if (!(pat >= 0.5 && pat < 1.0)) throw Error(ErrorCode::kValidation, "pat must lie in [0.5, 1)");
  for (double s : scaler.stds) {
    if (!(s >= 0.0)) throw Error(ErrorCode::kValidation, "scaler std must be non-negative");
  }
}

double score(const ModelWeights& model, const FeatureVector& fv) {
  std::vector<double> x(fv.values.size());
  standardize_into(model.scaler, fv.values, x);
  if (x.size() != model.w.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature vector does not match model");
  }
  return sigmoid(logit_of(model.w, model.b, x));
}

std::vector<double> score_batch(const ModelWeights& model, std::span<const FeatureVector> fvs) {
  const std::size_t d = model.w.size();
  Matrix x(fvs.size(), d);
  for (std::size_t r = 0; r < fvs.size(); ++r) standardize_into(model.scaler, fvs[r].values, x.row(r));
  std::vector<double> out(fvs.size());
  kernels::active().gemv(x.data(), x.rows(), d, model.w.data(), model.b, out.data());
  for (double& v : out) v = sigmoid(v);
  return out;
}

double tune_pat(std::span<const ScoredTap> held_out) {
  double worst_double = -1.0;
  for (const ScoredTap& t : held_out) {
    if (t.truth == TapLabel::kDoubleFirst) worst_double = std::max(worst_double, t.s);
  }
  for (int k = 50; k <= 99; ++k) {
    const double pat = k / 100.0;
    if (worst_double < pat) return pat;
  }
  return 0.99;
}

std::string dataset_digest(std::span<const FeatureVector> rows, std::span<const int> labels) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (double v : rows[r].values) mix(std::bit_cast<std::uint64_t>(v));
    mix(static_cast<std::uint64_t>(r < labels.size() ? labels[r] : -1));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<ScoredTap> TrainReport::pooled_held_out() const {
  std::vector<ScoredTap> out;
  for (const RoundReport& r : rounds) out.insert(out.end(), r.held_out.begin(), r.held_out.end());
  return out;
}

TrainResult train(std::span<const LabeledTap> taps, const FeatureProfile& profile,
                  const TrainConfig& config) {
  config.validate();
  std::vector<FeatureVector> raw;
  std::vector<int> labels;
  std::vector<TapLabel> truths;
  for (const LabeledTap& t : taps) {
    if (t.role == TapRole::kDoubleSecond) continue;
    raw.push_back(extract(t.tap, profile));
    labels.push_back(label_value(t.label));
    truths.push_back(t.label);
  }
  require_both_classes(labels);

  TrainResult result;
  TrainReport& report = result.report;
  for (int round = 0; round < config.rounds; ++round) {
    RoundReport rr;
    rr.seed = derive_seed(config.seed, static_cast<std::uint64_t>(round));

    // Stratified train/test split.
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    std::mt19937_64 rng(derive_seed(rr.seed, 0));
    for (int cls : {kSingleLabel, kDoubleFirstLabel}) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == cls) idx.push_back(i);
      }
      std::shuffle(idx.begin(), idx.end(), rng);
      std::size_t n_test = static_cast<std::size_t>(
          std::lround(config.test_fraction * static_cast<double>(idx.size())));
      if (idx.size() >= 2) n_test = std::clamp<std::size_t>(n_test, 1, idx.size() - 1);
      else n_test = 0;
      test_idx.insert(test_idx.end(), idx.begin(), idx.begin() + static_cast<long>(n_test));
      train_idx.insert(train_idx.end(), idx.begin() + static_cast<long>(n_test), idx.end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());

    std::vector<FeatureVector> train_raw;
    for (std::size_t i : train_idx) train_raw.push_back(raw[i]);
    const Scaler scaler = standardize_fit(train_raw);

    std::vector<Sample> samples;
    for (std::size_t k = 0; k < train_idx.size(); ++k) {
      const std::size_t i = train_idx[k];
      samples.push_back({standardize_apply(scaler, raw[i]).values, labels[i], raw[i].tap_id});
    }
    if (config.balance) samples = balance(samples, derive_seed(rr.seed, 1));

    TrainConfig cv_config = config;
    cv_config.seed = derive_seed(rr.seed, 2);
    rr.cost = cross_validate_cost(samples, cv_config).cost;

    std::vector<std::size_t> all(samples.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<int> sample_labels;
    for (const Sample& s : samples) sample_labels.push_back(s.label);
    const L1Solution sol = solve_l1(matrix_of(samples, all), sample_labels, rr.cost,
                                    SolverOptions{config.solver_tol, config.max_iter});
    rr.w = sol.w;
    rr.b = sol.b;
    rr.train_size = samples.size();

    BinaryCounts train_counts;
    for (const Sample& s : samples) {
      train_counts.add(logit_of(sol.w, sol.b, s.x) >= 0.0, s.label == kSingleLabel);
    }
    rr.train_accuracy = train_counts.accuracy();

    const ModelWeights model{sol.w, sol.b, scaler, profile, config.pat};
    std::vector<FeatureVector> test_raw;
    for (std::size_t i : test_idx) test_raw.push_back(raw[i]);
    const std::vector<double> scores = score_batch(model, test_raw);
    BinaryCounts test_counts;
    for (std::size_t k = 0; k < test_idx.size(); ++k) {
      const std::size_t i = test_idx[k];
      rr.held_out.push_back({raw[i].tap_id, scores[k], truths[i]});
      test_counts.add(scores[k] >= 0.5, labels[i] == kSingleLabel);
    }
    rr.test_size = test_idx.size();
    rr.test_accuracy = test_counts.accuracy();
    rr.test_precision = test_counts.precision();
    rr.test_recall = test_counts.recall();

    if (round + 1 == config.rounds) result.model = model;
    report.rounds.push_back(std::move(rr));
  }

  const auto mean_of = [&](double RoundReport::*field) {
    double total = 0.0;
    for (const RoundReport& r : report.rounds) total += r.*field;
    return total / static_cast<double>(report.rounds.size());
  };
  report.mean_train_accuracy = mean_of(&RoundReport::train_accuracy);
  report.mean_test_accuracy = mean_of(&RoundReport::test_accuracy);
  report.mean_test_precision = mean_of(&RoundReport::test_precision);
  report.mean_test_recall = mean_of(&RoundReport::test_recall);

  if (config.tune_pat) result.model.pat = tune_pat(report.rounds.back().held_out);
  report.meta = TrainMeta{config.seed, report.rounds.back().cost, config.rounds,
                          dataset_digest(raw, labels)};
  return result;
}

}  // namespace quicktap
