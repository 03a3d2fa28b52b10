// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

// AVX2 + FMA kernels. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a runtime CPU check (see dispatch.cpp).

#include "kernels_impl.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define RAWPIPE_HAVE_AVX2_TU 1
#include <immintrin.h>

#include <algorithm>
#include <vector>
#endif

namespace rawpipe::simd::detail {

#if RAWPIPE_HAVE_AVX2_TU
namespace {

template <class T>
struct VecTraits;

template <>
struct VecTraits<float> {
  using Vec = __m256;
  static constexpr int kLanes = 8;
  static constexpr int kMR = 6;
  static constexpr int kNR = 16;
  static Vec zero() { return _mm256_setzero_ps(); }
  static Vec load(const float* p) { return _mm256_loadu_ps(p); }
  static void store(float* p, Vec v) { _mm256_storeu_ps(p, v); }
  static Vec set1(float v) { return _mm256_set1_ps(v); }
  static Vec add(Vec a, Vec b) { return _mm256_add_ps(a, b); }
  static Vec fma(Vec a, Vec b, Vec c) { return _mm256_fmadd_ps(a, b, c); }
};

template <>
struct VecTraits<double> {
  using Vec = __m256d;
  static constexpr int kLanes = 4;
  static constexpr int kMR = 6;
  static constexpr int kNR = 8;
  static Vec zero() { return _mm256_setzero_pd(); }
  static Vec load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, Vec v) { _mm256_storeu_pd(p, v); }
  static Vec set1(double v) { return _mm256_set1_pd(v); }
  static Vec add(Vec a, Vec b) { return _mm256_add_pd(a, b); }
  static Vec fma(Vec a, Vec b, Vec c) { return _mm256_fmadd_pd(a, b, c); }
};

constexpr int kKC = 256;
constexpr int kMC = 96;
constexpr int kNC = 2048;

// Register-blocked MR x NR update: C += Ap * Bp over kc steps.
template <class T>
void micro_kernel(int kc, const T* ap, const T* bp, T* c, int ldc, int mr, int nr) {
  using Tr = VecTraits<T>;
  using Vec = typename Tr::Vec;
  constexpr int MR = Tr::kMR;
  constexpr int NR = Tr::kNR;
  constexpr int L = Tr::kLanes;

  Vec acc[MR][2];
#pragma GCC unroll 6
  for (int r = 0; r < MR; ++r) acc[r][0] = acc[r][1] = Tr::zero();

  for (int p = 0; p < kc; ++p) {
    const Vec b0 = Tr::load(bp + p * NR);
    const Vec b1 = Tr::load(bp + p * NR + L);
#pragma GCC unroll 6
    for (int r = 0; r < MR; ++r) {
      const Vec a = Tr::set1(ap[p * MR + r]);
      acc[r][0] = Tr::fma(a, b0, acc[r][0]);
      acc[r][1] = Tr::fma(a, b1, acc[r][1]);
    }
  }

  if (mr == MR && nr == NR) {
#pragma GCC unroll 6
    for (int r = 0; r < MR; ++r) {
      T* crow = c + static_cast<std::ptrdiff_t>(r) * ldc;
      Tr::store(crow, Tr::add(Tr::load(crow), acc[r][0]));
      Tr::store(crow + L, Tr::add(Tr::load(crow + L), acc[r][1]));
    }
    return;
  }
  alignas(32) T tmp[MR * NR];
  for (int r = 0; r < MR; ++r) {
    Tr::store(tmp + r * NR, acc[r][0]);
    Tr::store(tmp + r * NR + L, acc[r][1]);
  }
  for (int r = 0; r < mr; ++r) {
    T* crow = c + static_cast<std::ptrdiff_t>(r) * ldc;
    for (int j = 0; j < nr; ++j) crow[j] += tmp[r * NR + j];
  }
}

template <class T>
void pack_a(bool trans, const T* a, int lda, int i0, int mc, int p0, int kc, T* out) {
  constexpr int MR = VecTraits<T>::kMR;
  for (int ip = 0; ip < mc; ip += MR) {
    const int mr = std::min(MR, mc - ip);
    T* dst = out + static_cast<std::ptrdiff_t>(ip) * kc;
    for (int p = 0; p < kc; ++p) {
      for (int r = 0; r < mr; ++r) {
        const int i = i0 + ip + r;
        const int k = p0 + p;
        dst[p * MR + r] = trans ? a[static_cast<std::ptrdiff_t>(k) * lda + i]
                                : a[static_cast<std::ptrdiff_t>(i) * lda + k];
      }
      for (int r = mr; r < MR; ++r) dst[p * MR + r] = T(0);
    }
  }
}

template <class T>
void pack_b(bool trans, const T* b, int ldb, int p0, int kc, int j0, int nc, T* out) {
  constexpr int NR = VecTraits<T>::kNR;
  for (int jp = 0; jp < nc; jp += NR) {
    const int nr = std::min(NR, nc - jp);
    T* dst = out + static_cast<std::ptrdiff_t>(jp) * kc;
    for (int p = 0; p < kc; ++p) {
      const int k = p0 + p;
      T* row = dst + p * NR;
      if (!trans) {
        const T* src = b + static_cast<std::ptrdiff_t>(k) * ldb + j0 + jp;
        for (int j = 0; j < nr; ++j) row[j] = src[j];
      } else {
        for (int j = 0; j < nr; ++j) row[j] = b[static_cast<std::ptrdiff_t>(j0 + jp + j) * ldb + k];
      }
      for (int j = nr; j < NR; ++j) row[j] = T(0);
    }
  }
}

template <class T>
void gemm_avx2(bool trans_a, bool trans_b, int m, int n, int k, const T* a, int lda, const T* b,
               int ldb, T* c, int ldc) {
  constexpr int MR = VecTraits<T>::kMR;
  constexpr int NR = VecTraits<T>::kNR;
  if (m <= 0 || n <= 0 || k <= 0) return;

  thread_local std::vector<T> a_buf;
  thread_local std::vector<T> b_buf;
  a_buf.resize(static_cast<std::size_t>(kKC) * (kMC + MR));
  b_buf.resize(static_cast<std::size_t>(kKC) * (kNC + NR));

  for (int jc = 0; jc < n; jc += kNC) {
    const int nc = std::min(kNC, n - jc);
    for (int pc = 0; pc < k; pc += kKC) {
      const int kc = std::min(kKC, k - pc);
      pack_b(trans_b, b, ldb, pc, kc, jc, nc, b_buf.data());
      for (int ic = 0; ic < m; ic += kMC) {
        const int mc = std::min(kMC, m - ic);
        pack_a(trans_a, a, lda, ic, mc, pc, kc, a_buf.data());
        for (int jr = 0; jr < nc; jr += NR) {
          const int nr = std::min(NR, nc - jr);
          const T* bp = b_buf.data() + static_cast<std::ptrdiff_t>(jr) * kc;
          for (int ir = 0; ir < mc; ir += MR) {
            const int mr = std::min(MR, mc - ir);
            const T* ap = a_buf.data() + static_cast<std::ptrdiff_t>(ir) * kc;
            T* cp = c + static_cast<std::ptrdiff_t>(ic + ir) * ldc + jc + jr;
            micro_kernel<T>(kc, ap, bp, cp, ldc, mr, nr);
          }
        }
      }
    }
  }
}

template <class T>
void fir_avx2(const T* in, int n, const T* taps, int ntaps, T* out) {
  using Tr = VecTraits<T>;
  constexpr int L = Tr::kLanes;
  int i = 0;
  for (; i + 2 * L <= n; i += 2 * L) {
    auto acc0 = Tr::zero();
    auto acc1 = Tr::zero();
    for (int t = 0; t < ntaps; ++t) {
      const auto w = Tr::set1(taps[t]);
      acc0 = Tr::fma(w, Tr::load(in + i + t), acc0);
      acc1 = Tr::fma(w, Tr::load(in + i + t + L), acc1);
    }
    Tr::store(out + i, acc0);
    Tr::store(out + i + L, acc1);
  }
  for (; i + L <= n; i += L) {
    auto acc = Tr::zero();
    for (int t = 0; t < ntaps; ++t) acc = Tr::fma(Tr::set1(taps[t]), Tr::load(in + i + t), acc);
    Tr::store(out + i, acc);
  }
  for (; i < n; ++i) {
    T acc = 0;
    for (int t = 0; t < ntaps; ++t) acc += taps[t] * in[i + t];
    out[i] = acc;
  }
}

template <class T>
void axpy_avx2(int n, T alpha, const T* x, T* y) {
  using Tr = VecTraits<T>;
  constexpr int L = Tr::kLanes;
  const auto va = Tr::set1(alpha);
  int i = 0;
  for (; i + L <= n; i += L) Tr::store(y + i, Tr::fma(va, Tr::load(x + i), Tr::load(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const Kernels<float>* avx2_f32() {
  static const Kernels<float> k{&gemm_avx2<float>, &fir_avx2<float>, &axpy_avx2<float>,
                                Level::Avx2};
  return &k;
}

const Kernels<double>* avx2_f64() {
  static const Kernels<double> k{&gemm_avx2<double>, &fir_avx2<double>, &axpy_avx2<double>,
                                 Level::Avx2};
  return &k;
}

double avx2_sum_squared_diff(const float* a, const float* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 va = _mm256_loadu_ps(a + i);
    const __m256 vb = _mm256_loadu_ps(b + i);
    const __m256d d0 = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(va)),
                                     _mm256_cvtps_pd(_mm256_castps256_ps128(vb)));
    const __m256d d1 = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(va, 1)),
                                     _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1)));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return acc;
}

#else

const Kernels<float>* avx2_f32() { return nullptr; }
const Kernels<double>* avx2_f64() { return nullptr; }
double avx2_sum_squared_diff(const float* a, const float* b, std::size_t n) {
  return scalar_sum_squared_diff(a, b, n);
}

#endif

}  // namespace rawpipe::simd::detail
