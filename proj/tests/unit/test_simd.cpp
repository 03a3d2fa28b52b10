// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rawpipe/simd/kernels.hpp"

using namespace rawpipe;
using namespace rawpipe::simd;

namespace {

template <class T>
std::vector<T> random_vec(std::size_t n, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>(d(gen));
  return v;
}

template <class T>
void check_gemm_equivalence(double tol) {
  const auto& ref = kernels<T>(Level::Scalar);
  const auto& fast = kernels<T>(Level::Avx2);
  const int shapes[][3] = {{1, 1, 1},   {5, 7, 3},    {6, 16, 8},     {13, 33, 29},
                           {32, 1024, 288}, {97, 50, 260}, {4, 2100, 17}};
  for (bool ta : {false, true})
    for (bool tb : {false, true})
      for (const auto& s : shapes) {
        const int m = s[0], n = s[1], k = s[2];
        const int lda = (ta ? m : k) + 3;
        const int ldb = (tb ? k : n) + 1;
        const int ldc = n + 2;
        const auto a = random_vec<T>(static_cast<std::size_t>(ta ? k : m) * lda, 1);
        const auto b = random_vec<T>(static_cast<std::size_t>(tb ? n : k) * ldb, 2);
        auto c0 = random_vec<T>(static_cast<std::size_t>(m) * ldc, 3);
        auto c1 = c0;
        ref.gemm(ta, tb, m, n, k, a.data(), lda, b.data(), ldb, c0.data(), ldc);
        fast.gemm(ta, tb, m, n, k, a.data(), lda, b.data(), ldb, c1.data(), ldc);
        double worst = 0.0;
        for (std::size_t i = 0; i < c0.size(); ++i)
          worst = std::max(worst, std::abs(static_cast<double>(c0[i]) - c1[i]));
        CAPTURE(m);
        CAPTURE(n);
        CAPTURE(k);
        CHECK(worst <= tol * std::sqrt(static_cast<double>(k)));
      }
}

}  // namespace

TEST_SUITE("simd") {
  TEST_CASE("scalar GEMM matches a naive triple loop") {
    const int m = 7, n = 9, k = 5;
    const auto a = random_vec<double>(m * k, 4);
    const auto b = random_vec<double>(k * n, 5);
    std::vector<double> c(m * n, 0.5);
    kernels<double>(Level::Scalar).gemm(false, false, m, n, k, a.data(), k, b.data(), n, c.data(), n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        double e = 0.5;
        for (int p = 0; p < k; ++p) e += a[i * k + p] * b[p * n + j];
        CHECK(c[i * n + j] == doctest::Approx(e).epsilon(1e-14));
      }
  }

  TEST_CASE("AVX2 kernels agree with the scalar reference") {
    if (!level_supported(Level::Avx2)) {
      MESSAGE("AVX2 not available on this CPU; equivalence not exercised");
      return;
    }
    check_gemm_equivalence<float>(2e-6);
    check_gemm_equivalence<double>(1e-14);

    for (int n : {1, 7, 64, 1000}) {
      for (int nt : {1, 3, 11, 19}) {
        const auto in = random_vec<float>(n + nt - 1, 6);
        const auto taps = random_vec<float>(nt, 7);
        std::vector<float> o0(n), o1(n);
        kernels<float>(Level::Scalar).fir(in.data(), n, taps.data(), nt, o0.data());
        kernels<float>(Level::Avx2).fir(in.data(), n, taps.data(), nt, o1.data());
        for (int i = 0; i < n; ++i) CHECK(o0[i] == doctest::Approx(o1[i]).epsilon(1e-5));
        const auto ind = random_vec<double>(n + nt - 1, 8);
        const auto tapd = random_vec<double>(nt, 9);
        std::vector<double> d0(n), d1(n);
        kernels<double>(Level::Scalar).fir(ind.data(), n, tapd.data(), nt, d0.data());
        kernels<double>(Level::Avx2).fir(ind.data(), n, tapd.data(), nt, d1.data());
        for (int i = 0; i < n; ++i) CHECK(d0[i] == doctest::Approx(d1[i]).epsilon(1e-13));
      }
      const auto x = random_vec<float>(n, 10);
      auto y0 = random_vec<float>(n, 11);
      auto y1 = y0;
      kernels<float>(Level::Scalar).axpy(n, 0.37f, x.data(), y0.data());
      kernels<float>(Level::Avx2).axpy(n, 0.37f, x.data(), y1.data());
      for (int i = 0; i < n; ++i) CHECK(y0[i] == doctest::Approx(y1[i]).epsilon(1e-6));
      const auto b = random_vec<float>(n, 12);
      CHECK(sum_squared_diff(x.data(), b.data(), n, Level::Scalar) ==
            doctest::Approx(sum_squared_diff(x.data(), b.data(), n, Level::Avx2)).epsilon(1e-12));
    }
  }

  TEST_CASE("level selection") {
    const Level saved = active_level();
    CHECK(level_supported(Level::Scalar));
    set_level(Level::Scalar);
    CHECK(active_level() == Level::Scalar);
    CHECK(kernels<float>().level == Level::Scalar);
    if (!level_supported(Level::Avx2)) CHECK_THROWS(set_level(Level::Avx2));
    set_level(saved);
    CHECK(active_level() == saved);
  }
}
