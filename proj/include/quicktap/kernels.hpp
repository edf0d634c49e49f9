// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Dense double-precision inner loops used by the solver and batch scoring.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The variant is
// chosen once at first use from the running CPU's capabilities; tests pin a
// backend with select() and check the vector variants against the scalar
// reference.
//
// Vector variants reassociate sums, so results agree with the scalar path to
// rounding, not bit-for-bit. A single process always uses one backend, so
// repeated runs on the same machine are bit-identical.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace quicktap::kernels {

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view backend_name(Backend backend);

struct KernelTable {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum_i w[i] * x[i] * x[i]
  double (*weighted_sq_sum)(const double* x, const double* w, std::size_t n);
  // out[r] = bias + sum_c m[r * cols + c] * v[c], m row-major
  void (*gemv)(const double* m, std::size_t rows, std::size_t cols, const double* v,
               double bias, double* out);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double weighted_sq_sum(const double* x, const double* w, std::size_t n);
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* v, double bias,
          double* out);
}  // namespace scalar

/// Backends compiled in and supported by this CPU. Always contains kScalar.
std::vector<Backend> available_backends();

/// The table in use for this process.
const KernelTable& active();
Backend active_backend();

/// Forces a backend. Returns false (and leaves the selection unchanged) when
/// the backend is unavailable.
bool select(Backend backend);

/// Table for a specific backend, or nullptr when unavailable.
const KernelTable* table_for(Backend backend);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double weighted_sq_sum(std::span<const double> x, std::span<const double> w) {
  return active().weighted_sq_sum(x.data(), w.data(), x.size());
}

}  // namespace quicktap::kernels
