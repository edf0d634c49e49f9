// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>

#include "quicktap/kernels.hpp"

namespace quicktap::kernels {

#if defined(QUICKTAP_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double weighted_sq_sum(const double* x, const double* w, std::size_t n);
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* v, double bias,
          double* out);
}  // namespace avx2
#endif

#if defined(QUICKTAP_HAVE_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double weighted_sq_sum(const double* x, const double* w, std::size_t n);
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* v, double bias,
          double* out);
}  // namespace neon
#endif

namespace {

constexpr KernelTable kScalarTable{scalar::dot, scalar::axpy, scalar::weighted_sq_sum,
                                   scalar::gemv};
#if defined(QUICKTAP_HAVE_AVX2)
constexpr KernelTable kAvx2Table{avx2::dot, avx2::axpy, avx2::weighted_sq_sum, avx2::gemv};
#endif
#if defined(QUICKTAP_HAVE_NEON)
constexpr KernelTable kNeonTable{neon::dot, neon::axpy, neon::weighted_sq_sum, neon::gemv};
#endif

bool cpu_supports(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(QUICKTAP_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::kNeon:
#if defined(QUICKTAP_HAVE_NEON)
      return true;  // mandatory on aarch64
#else
      return false;
#endif
  }
  return false;
}

Backend best_backend() {
  if (cpu_supports(Backend::kAvx2)) return Backend::kAvx2;
  if (cpu_supports(Backend::kNeon)) return Backend::kNeon;
  return Backend::kScalar;
}

struct Selection {
  std::atomic<Backend> backend{best_backend()};
};

Selection& selection() {
  static Selection s;
  return s;
}

}  // namespace

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
    case Backend::kNeon:
      return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Backend backend) {
  if (!cpu_supports(backend)) return nullptr;
  switch (backend) {
    case Backend::kScalar:
      return &kScalarTable;
    case Backend::kAvx2:
#if defined(QUICKTAP_HAVE_AVX2)
      return &kAvx2Table;
#else
      return nullptr;
#endif
    case Backend::kNeon:
#if defined(QUICKTAP_HAVE_NEON)
      return &kNeonTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
    if (cpu_supports(b)) out.push_back(b);
  }
  return out;
}

Backend active_backend() { return selection().backend.load(std::memory_order_relaxed); }

const KernelTable& active() { return *table_for(active_backend()); }

bool select(Backend backend) {
  if (!cpu_supports(backend)) return false;
  selection().backend.store(backend, std::memory_order_relaxed);
  return true;
}

}  // namespace quicktap::kernels
