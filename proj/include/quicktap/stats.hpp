// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string_view>

namespace quicktap {

struct UTestResult {
  double u = 0.0;  // pairs with a > b, ties counted as 1/2
  double z = 0.0;  // normal approximation with tie and continuity correction
  double p_two_sided = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool tie_corrected = false;  // the pooled sample contained ties
  bool exact = false;          // p from the full permutation distribution
};

/// Samples with n1 + n2 at or below this use the exact permutation p-value.
inline constexpr std::size_t kExactMannWhitneyLimit = 12;

/// Mann-Whitney U of `a` against `b` from midrank sums.
///
/// For n1 + n2 <= kExactMannWhitneyLimit the two-sided p-value is the exact
/// probability, under random relabeling of the pooled midranks, of a U at
/// least as far from n1*n2/2 as the observed one. Larger samples use the
/// tie-corrected normal approximation with continuity correction.
/// Throws Error(kEmptyInput) if either sample is empty.
UTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

enum class EffectDescriptor { kVerySmall, kSmall, kMedium, kLarge, kVeryLarge, kHuge };

std::string_view descriptor_name(EffectDescriptor d);

/// Band for |d|: <0.2, <0.5, <0.8, <1.2, <2.0, otherwise huge.
EffectDescriptor describe_effect(double d);

struct EffectSize {
  double d = 0.0;
  EffectDescriptor descriptor = EffectDescriptor::kVerySmall;
};

/// Cohen's d with pooled sample variance, (mean_a - mean_b) / s_pooled.
/// Throws Error(kTooFewRows) unless both samples have at least 2 values,
/// kZeroVariance when the pooled variance is 0.
EffectSize cohens_d(std::span<const double> a, std::span<const double> b);

}  // namespace quicktap
