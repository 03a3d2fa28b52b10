// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "rawpipe/degrade.hpp"
#include "rawpipe/metrics.hpp"
#include "support/oracles.hpp"

using namespace rawpipe;

TEST_SUITE("metrics") {
  TEST_CASE("PSNR: cap on identical images") {
    const ColorImage a = oracle::random_color(16, 16, 1);
    CHECK(psnr(a, a) == 99.0);
  }

  TEST_CASE("PSNR closed form: MSE of exactly 1/100 is 20 dB") {
    // 10x10x3 = 300 samples, three of which differ by exactly 1.
    const ColorImage a(10, 10, 0.0f);
    ColorImage b = a;
    b.at(0, 1, 2) = 1.0f;
    b.at(1, 5, 5) = 1.0f;
    b.at(2, 9, 0) = 1.0f;
    CHECK(std::abs(psnr(a, b) - 20.0) < 1e-9);
  }

  TEST_CASE("PSNR of a uniform +0.1 offset") {
    ColorImage lo(16, 16, 0.3f), hi(16, 16);
    for (std::size_t i = 0; i < hi.size(); ++i)
      hi.values()[i] = static_cast<float>(static_cast<double>(lo.values()[i]) + 0.1);
    // 0.1 has no exact float representation; the residual moves PSNR by ~1e-7 dB.
    CHECK(psnr(lo, hi) == doctest::Approx(oracle::psnr(lo, hi)).epsilon(1e-12));
    CHECK(std::abs(psnr(lo, hi) - 20.0) < 1e-5);
  }

  TEST_CASE("PSNR matches the naive oracle on random pairs") {
    for (std::uint32_t s = 0; s < 10; ++s) {
      const ColorImage a = oracle::random_color(20, 24, s);
      const ColorImage b = oracle::random_color(20, 24, 100 + s);
      CHECK(std::abs(psnr(a, b) - oracle::psnr(a, b)) < 1e-9);
    }
  }

  TEST_CASE("SSIM matches direct windowed statistics") {
    for (std::uint32_t s = 0; s < 5; ++s) {
      const ColorImage a = oracle::random_color(16, 16, s);
      ColorImage b = a;
      const ColorImage n = oracle::random_color(16, 16, 50 + s);
      for (std::size_t i = 0; i < b.size(); ++i)
        b.values()[i] = 0.7f * b.values()[i] + 0.3f * n.values()[i];
      CHECK(std::abs(ssim(a, b) - oracle::ssim(a, b)) < 1e-7);
    }
    const ColorImage a = oracle::random_color(23, 17, 9);
    const ColorImage b = oracle::random_color(23, 17, 10);
    CHECK(std::abs(ssim(a, b) - oracle::ssim(a, b)) < 1e-7);
  }

  TEST_CASE("SSIM of an image with itself is exactly one") {
    const ColorImage a = oracle::random_color(32, 32, 4);
    CHECK(ssim(a, a) == 1.0);
  }

  TEST_CASE("SSIM of a binary image and its complement is negative") {
    ColorImage x(16, 16);
    const ColorImage r = oracle::random_color(16, 16, 2);
    for (std::size_t i = 0; i < x.size(); ++i) x.values()[i] = r.values()[i] > 0.5f ? 1.0f : 0.0f;
    ColorImage y = x;
    for (auto& v : y.values()) v = 1.0f - v;
    CHECK(ssim(x, y) < 0.0);
  }

  TEST_CASE("shape errors") {
    CHECK_THROWS_AS(psnr(ColorImage(8, 8), ColorImage(8, 10)), DimensionError);
    CHECK_THROWS_AS(ssim(ColorImage(8, 8), ColorImage(8, 8)), DimensionError);
    CHECK_THROWS_AS(ssim(ColorImage(12, 12), ColorImage(12, 14)), DimensionError);
  }

  TEST_CASE("property: symmetry and determinism") {
    const ColorImage a = oracle::random_color(16, 20, 7);
    const ColorImage b = oracle::random_color(16, 20, 8);
    CHECK(psnr(a, b) == psnr(b, a));
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
    CHECK(ssim(a, b) == ssim(a, b));
    const double s = ssim(a, b);
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
  }

  TEST_CASE("property: PSNR falls as noise grows") {
    const PlanarImage flat(3, 64, 64, 0.5f);
    double prev = 1e9;
    for (double sigma : {2.0, 5.0, 10.0, 20.0, 40.0}) {
      double mean = 0.0;
      for (std::uint64_t seed = 0; seed < 4; ++seed) mean += psnr(add_awgn(flat, sigma, seed), flat);
      mean /= 4.0;
      CHECK(mean < prev);
      prev = mean;
    }
  }

  TEST_CASE("report CSV has a mean row") {
    MetricsReport r;
    r.images = {{"a.png", 30.0, 0.9}, {"b.png", 20.0, 0.7}};
    r.finalize();
    CHECK(r.mean_psnr_db == doctest::Approx(25.0));
    CHECK(r.mean_ssim == doctest::Approx(0.8));
    const std::string csv = r.to_csv();
    CHECK(csv.rfind("name,psnr_db,ssim\n", 0) == 0);
    CHECK(csv.find("mean,25.0000,0.800000") != std::string::npos);
  }
}
