// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2 -mfma. Keep this file free of standard-library
// templates so no AVX-encoded inline function can leak into baseline code.

#include <immintrin.h>

#include <cstddef>

namespace quicktap::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

double weighted_sq_sum(const double* x, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), vx), vx, acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    total += w[i] * x[i] * x[i];
  }
  return total;
}

// Four rows per step; each column weight is broadcast once and applied to a
// strided column slice. Feature counts are small (2..11), so vectorizing
// across rows beats vectorizing inside a row.
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* v, double bias,
          double* out) {
  std::size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    const double* r0 = m + r * cols;
    const double* r1 = r0 + cols;
    const double* r2 = r1 + cols;
    const double* r3 = r2 + cols;
    __m256d acc = _mm256_set1_pd(bias);
    for (std::size_t c = 0; c < cols; ++c) {
      const __m256d col = _mm256_set_pd(r3[c], r2[c], r1[c], r0[c]);
      acc = _mm256_fmadd_pd(col, _mm256_set1_pd(v[c]), acc);
    }
    _mm256_storeu_pd(out + r, acc);
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

}  // namespace quicktap::kernels::avx2
