// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "rawpipe/bayer.hpp"
#include "rawpipe/degrade.hpp"
#include "support/oracles.hpp"

using namespace rawpipe;

namespace {

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

Moments moments_of_diff(const PlanarImage& a, const PlanarImage& b) {
  const auto x = a.values();
  const auto y = b.values();
  double s = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
    s += d;
    ss += d * d;
  }
  const double n = static_cast<double>(x.size());
  const double mean = s / n;
  return {mean, std::sqrt(ss / n - mean * mean)};
}

}  // namespace

TEST_SUITE("degrade") {
  TEST_CASE("block mean of a 2x2 block") {
    ColorImage img(2, 2);
    for (int c = 0; c < 3; ++c) {
      img.at(c, 0, 0) = 0.1f;
      img.at(c, 0, 1) = 0.2f;
      img.at(c, 1, 0) = 0.3f;
      img.at(c, 1, 1) = 0.4f;
    }
    const ColorImage d = downsample_avg(img, 2);
    CHECK(d.height() == 1);
    for (int c = 0; c < 3; ++c) CHECK(d.at(c, 0, 0) == doctest::Approx(0.25).epsilon(1e-7));
  }

  TEST_CASE("checkerboard averages to one half") {
    ColorImage img(4, 4);
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) img.at(c, y, x) = static_cast<float>((x + y) % 2);
    for (float v : oracle::values_of(downsample_avg(img, 2))) CHECK(v == 0.5f);
  }

  TEST_CASE("non-divisible dimensions are rejected") {
    CHECK_THROWS_AS(downsample_avg(ColorImage(6, 6), 4), DimensionError);
  }

  TEST_CASE("property: downsampling preserves the global mean") {
    for (int f : {1, 2, 3, 4}) {
      const ColorImage img = oracle::random_color(24, 36, 11 + f);
      const ColorImage d = downsample_avg(img, f);
      double a = 0.0, b = 0.0;
      for (float v : img.values()) a += v;
      for (float v : d.values()) b += v;
      a /= static_cast<double>(img.size());
      b /= static_cast<double>(d.size());
      CHECK(std::abs(a - b) <= 1e-6 * std::abs(a));
    }
  }

  TEST_CASE("zero noise is the identity and negative sigma is rejected") {
    const PlanarImage p = oracle::random_planar(1, 16, 16, 4);
    CHECK(add_awgn(p, 0.0, 9) == p);
    CHECK_THROWS_AS(add_awgn(p, -1.0, 9), ParameterError);
  }

  TEST_CASE("noise statistics on a mid-gray plane") {
    const PlanarImage flat(1, 256, 256, 0.5f);
    const PlanarImage noisy = add_awgn(flat, 10.0, 1234);
    const Moments m = moments_of_diff(noisy, flat);
    CHECK(std::abs(m.std - 10.0 / 255.0) <= 0.05 * 10.0 / 255.0);
    CHECK(std::abs(m.mean) < 1e-3);
    CHECK(add_awgn(flat, 10.0, 1234) == noisy);
  }

  TEST_CASE("property: different seeds give uncorrelated noise") {
    const PlanarImage flat(1, 256, 256, 0.5f);
    const PlanarImage a = add_awgn(flat, 10.0, 1);
    const PlanarImage b = add_awgn(flat, 10.0, 2);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double x = a.values()[i] - 0.5;
      const double y = b.values()[i] - 0.5;
      sab += x * y;
      saa += x * x;
      sbb += y * y;
    }
    CHECK(std::abs(sab / std::sqrt(saa * sbb)) < 0.05);
  }

  TEST_CASE("noise is clamped to the unit range") {
    const PlanarImage bright(1, 64, 64, 0.99f);
    for (float v : oracle::values_of(add_awgn(bright, 50.0, 5))) {
      CHECK(v >= 0.0f);
      CHECK(v <= 1.0f);
    }
  }

  TEST_CASE("identity degradation is pure CFA sampling") {
    const ColorImage gt = oracle::random_color(8, 12, 21);
    DegradationSpec spec;
    spec.scale = 1;
    spec.sigma = 0.0;
    const DegradedPair p = degrade(gt, spec);
    CHECK(p.lr_mosaic_noisy == mosaic_from_color(gt));
    CHECK(p.lr_mosaic_clean == p.lr_mosaic_noisy);
  }

  TEST_CASE("8x8 ramp at scale 2 matches a hand computation") {
    ColorImage gt(8, 8);
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) gt.at(c, y, x) = static_cast<float>((c + 1) * 0.01 * (8 * y + x));
    DegradationSpec spec;
    spec.scale = 2;
    const DegradedPair p = degrade(gt, spec);
    REQUIRE(p.lr_mosaic_clean.height() == 4);
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) {
        // Block mean of 8y'+x' over the 2x2 block at (2y, 2x) is 16y + 2x + 4.5.
        const int c = oracle::site_color(y, x);
        const double expected = (c + 1) * 0.01 * (16.0 * y + 2.0 * x + 4.5);
        CHECK(p.lr_mosaic_clean(y, x) == doctest::Approx(expected).epsilon(1e-6));
      }
  }

  TEST_CASE("degraded pair shapes and noise map") {
    const ColorImage gt = oracle::random_color(32, 48, 2);
    DegradationSpec spec;
    spec.scale = 2;
    spec.sigma = 20.0;
    spec.seed = 77;
    const DegradedPair p = degrade(gt, spec);
    CHECK(p.lr_color.height() == 16);
    CHECK(p.lr_color.width() == 24);
    CHECK(p.gt_hr_packed.height() == 16);
    CHECK(p.gt_hr_packed.width() == 24);
    CHECK(p.noise_map.channels() == 1);
    CHECK(p.noise_map.height() == 8);
    CHECK(p.noise_map.width() == 12);
    for (float v : p.noise_map.values()) CHECK(v == static_cast<float>(20.0 / 255.0));
    CHECK(pack(mosaic_from_color(gt)) == p.gt_hr_packed);
    CHECK(degrade(gt, spec).lr_mosaic_noisy == p.lr_mosaic_noisy);
  }

  TEST_CASE("constant gray with zero noise stays constant everywhere") {
    DegradationSpec spec;
    spec.scale = 2;
    const DegradedPair p = degrade(ColorImage(16, 16, 0.3f), spec);
    for (float v : p.lr_color.values()) CHECK(v == doctest::Approx(0.3f));
    for (float v : p.lr_mosaic_noisy.values()) CHECK(v == doctest::Approx(0.3f));
    for (float v : p.gt_hr_packed.values()) CHECK(v == 0.3f);
  }

  TEST_CASE("invalid specs are rejected") {
    DegradationSpec spec;
    spec.scale = 3;
    CHECK_THROWS_AS(degrade(ColorImage(16, 16), spec), DimensionError);
    spec.scale = 0;
    CHECK_THROWS_AS(degrade(ColorImage(16, 16), spec), ParameterError);
    spec.scale = 2;
    spec.sigma = -3.0;
    CHECK_THROWS_AS(degrade(ColorImage(16, 16), spec), ParameterError);
  }
}
