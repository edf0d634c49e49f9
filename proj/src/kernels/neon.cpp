// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include <arm_neon.h>

#include <cstddef>

namespace quicktap::kernels::neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

double weighted_sq_sum(const double* x, const double* w, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vx = vld1q_f64(x + i);
    acc = vfmaq_f64(acc, vmulq_f64(vld1q_f64(w + i), vx), vx);
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) {
    total += w[i] * x[i] * x[i];
  }
  return total;
}

void gemv(const double* m, std::size_t rows, std::size_t cols, const double* v, double bias,
          double* out) {
  std::size_t r = 0;
  for (; r + 2 <= rows; r += 2) {
    const double* r0 = m + r * cols;
    const double* r1 = r0 + cols;
    float64x2_t acc = vdupq_n_f64(bias);
    for (std::size_t c = 0; c < cols; ++c) {
      const double pair[2] = {r0[c], r1[c]};
      acc = vfmaq_n_f64(acc, vld1q_f64(pair), v[c]);
    }
    vst1q_f64(out + r, acc);
  }
  for (; r < rows; ++r) {
    const double* row = m + r * cols;
    double acc = bias;
    for (std::size_t c = 0; c < cols; ++c) {
      acc = __builtin_fma(row[c], v[c], acc);
    }
    out[r] = acc;
  }
}

}  // namespace quicktap::kernels::neon
