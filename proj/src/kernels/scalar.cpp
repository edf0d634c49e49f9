// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include "quicktap/kernels.hpp"

namespace quicktap::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

double weighted_sq_sum(const double* x, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += w[i] * x[i] * x[i];
  }
  return acc;
}

void gemv(const double* m, std::size_t rows, std::size_t cols, const double* v, double bias,
          double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] = bias + dot(m + r * cols, v, cols);
  }
}

}  // namespace quicktap::kernels::scalar
