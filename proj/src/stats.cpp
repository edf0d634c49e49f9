// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include "quicktap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "quicktap/error.hpp"

namespace quicktap {

namespace {

// Midranks of the pooled sample, doubled so they stay integral.
struct PooledRanks {
  std::vector<long long> doubled;  // per pooled index: a first, then b
  double tie_term = 0.0;           // sum over tie groups of t^3 - t
  bool has_ties = false;
};

PooledRanks rank_pooled(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<double> values(a.begin(), a.end());
  values.insert(values.end(), b.begin(), b.end());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });

  PooledRanks out;
  out.doubled.assign(n, 0);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Ranks i+1..j+1 share their average; doubled that is i + j + 2.
    const auto doubled_rank = static_cast<long long>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) out.doubled[order[k]] = doubled_rank;
    const double t = static_cast<double>(j - i + 1);
    if (j > i) {
      out.has_ties = true;
      out.tie_term += t * t * t - t;
    }
    i = j + 1;
  }
  return out;
}

// Exact two-sided p: the share of all C(n, n1) relabelings whose doubled rank
// sum lies at least as far from its mean as the observed one. Subset-sum
// counts are built by dynamic programming over the pooled doubled ranks.
double exact_p(const PooledRanks& ranks, std::size_t n1, long long observed_doubled_sum) {
  const std::size_t n = ranks.doubled.size();
  long long max_sum = 0;
  for (long long r : ranks.doubled) max_sum += r;
  std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(max_sum + 1, 0.0));
  ways[0][0] = 1.0;
  for (long long r : ranks.doubled) {
    for (std::size_t k = n1; k >= 1; --k) {
      for (long long s = max_sum; s >= r; --s) ways[k][s] += ways[k - 1][s - r];
    }
  }
  const auto center = static_cast<long long>(n1 * (n + 1));  // 2 * n1 * (n + 1) / 2
  const long long observed_dev = std::llabs(observed_doubled_sum - center);
  double extreme = 0.0;
  double total = 0.0;
  for (long long s = 0; s <= max_sum; ++s) {
    total += ways[n1][s];
    if (std::llabs(s - center) >= observed_dev) extreme += ways[n1][s];
  }
  return std::min(1.0, extreme / total);
}

double mean_of(std::span<const double> v) {
  double total = 0.0;
  for (double x : v) total += x;
  return total / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

UTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kEmptyInput, "Mann-Whitney U needs two non-empty samples");
  }
  const PooledRanks ranks = rank_pooled(a, b);
  long long doubled_sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) doubled_sum += ranks.doubled[i];

  UTestResult r;
  r.n1 = a.size();
  r.n2 = b.size();
  const double n1 = static_cast<double>(r.n1);
  const double n2 = static_cast<double>(r.n2);
  const double n = n1 + n2;
  r.u = static_cast<double>(doubled_sum) / 2.0 - n1 * (n1 + 1.0) / 2.0;
  r.tie_corrected = ranks.has_ties;

  const double mu = n1 * n2 / 2.0;
  const double var = n1 * n2 / 12.0 * ((n + 1.0) - ranks.tie_term / (n * (n - 1.0)));
  if (var > 0.0) {
    const double dev = r.u - mu;
    const double corrected = std::max(0.0, std::abs(dev) - 0.5);
    r.z = std::copysign(corrected, dev) / std::sqrt(var);
    r.p_two_sided = std::min(1.0, std::erfc(std::abs(r.z) / std::sqrt(2.0)));
  } else {
    r.z = 0.0;
    r.p_two_sided = 1.0;
  }
  if (r.n1 + r.n2 <= kExactMannWhitneyLimit) {
    r.exact = true;
    r.p_two_sided = exact_p(ranks, r.n1, doubled_sum);
  }
  return r;
}

std::string_view descriptor_name(EffectDescriptor d) {
  switch (d) {
    case EffectDescriptor::kVerySmall: return "Very Small";
    case EffectDescriptor::kSmall: return "Small";
    case EffectDescriptor::kMedium: return "Medium";
    case EffectDescriptor::kLarge: return "Large";
    case EffectDescriptor::kVeryLarge: return "Very Large";
    case EffectDescriptor::kHuge: return "Huge";
  }
  return "?";
}

EffectDescriptor describe_effect(double d) {
  const double m = std::abs(d);
  if (m < 0.2) return EffectDescriptor::kVerySmall;
  if (m < 0.5) return EffectDescriptor::kSmall;
  if (m < 0.8) return EffectDescriptor::kMedium;
  if (m < 1.2) return EffectDescriptor::kLarge;
  if (m < 2.0) return EffectDescriptor::kVeryLarge;
  return EffectDescriptor::kHuge;
}

EffectSize cohens_d(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::kTooFewRows, "Cohen's d needs at least two values per sample");
  }
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double pooled =
      ((na - 1.0) * sample_variance(a, ma) + (nb - 1.0) * sample_variance(b, mb)) / (na + nb - 2.0);
  if (!(pooled > 0.0)) throw Error(ErrorCode::kZeroVariance, "pooled variance is zero");
  EffectSize e;
  e.d = (ma - mb) / std::sqrt(pooled);
  e.descriptor = describe_effect(e.d);
  return e;
}

}  // namespace quicktap
