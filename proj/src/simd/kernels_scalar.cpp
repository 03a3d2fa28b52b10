// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

// Reference kernels. Straight loops, no blocking; these define the contract
// the vectorized variants are tested against.

#include "kernels_impl.hpp"

namespace rawpipe::simd::detail {
namespace {

template <class T>
void gemm_ref(bool trans_a, bool trans_b, int m, int n, int k, const T* a, int lda, const T* b,
              int ldb, T* c, int ldc) {
  for (int i = 0; i < m; ++i) {
    T* crow = c + static_cast<std::ptrdiff_t>(i) * ldc;
    for (int p = 0; p < k; ++p) {
      const T aip = trans_a ? a[static_cast<std::ptrdiff_t>(p) * lda + i]
                            : a[static_cast<std::ptrdiff_t>(i) * lda + p];
      if (aip == T(0)) continue;
      if (trans_b) {
        for (int j = 0; j < n; ++j) crow[j] += aip * b[static_cast<std::ptrdiff_t>(j) * ldb + p];
      } else {
        const T* brow = b + static_cast<std::ptrdiff_t>(p) * ldb;
        for (int j = 0; j < n; ++j) crow[j] += aip * brow[j];
      }
    }
  }
}

template <class T>
void fir_ref(const T* in, int n, const T* taps, int ntaps, T* out) {
  for (int i = 0; i < n; ++i) {
    T acc = 0;
    for (int t = 0; t < ntaps; ++t) acc += taps[t] * in[i + t];
    out[i] = acc;
  }
}

template <class T>
void axpy_ref(int n, T alpha, const T* x, T* y) {
  for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const Kernels<float>& scalar_f32() {
  static const Kernels<float> k{&gemm_ref<float>, &fir_ref<float>, &axpy_ref<float>,
                                Level::Scalar};
  return k;
}

const Kernels<double>& scalar_f64() {
  static const Kernels<double> k{&gemm_ref<double>, &fir_ref<double>, &axpy_ref<double>,
                                 Level::Scalar};
  return k;
}

double scalar_sum_squared_diff(const float* a, const float* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return acc;
}

}  // namespace rawpipe::simd::detail
