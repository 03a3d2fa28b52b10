// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "rawpipe/image.hpp"

namespace rawpipe {

/// Synthesis settings. `sigma` is the noise standard deviation on a 0-255
/// scale; noise is applied to the [0, 1] mosaic as sigma / 255.
struct DegradationSpec {
  int scale = 2;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  CfaPattern pattern = CfaPattern::RGGB;

  /// Throws ParameterError / DimensionError if these settings cannot be applied to
  /// an image of the given size.
  void validate(int height, int width) const;
};

struct DegradedPair {
  ColorImage gt_hr_color;
  PackedMosaic gt_hr_packed;
  ColorImage lr_color;
  BayerMosaic lr_mosaic_clean;
  BayerMosaic lr_mosaic_noisy;
  PlanarImage noise_map;  // one plane, packed LR resolution, constant sigma/255
};

/// Box-filter downsample: each output pixel is the mean of a factor x factor
/// block, per channel. Simulates pixel binning.
ColorImage downsample_avg(const ColorImage& img, int factor);

/// Adds i.i.d. N(0, (sigma255/255)^2) to every value and clamps to [0, 1].
/// Sample i uses CounterRng(seed).normal(i). sigma255 == 0 returns the input
/// unchanged.
PlanarImage add_awgn(const PlanarImage& plane, double sigma255, std::uint64_t seed);
BayerMosaic add_awgn(const BayerMosaic& m, double sigma255, std::uint64_t seed);

/// downsample -> CFA sample -> add noise, plus the HR targets.
DegradedPair degrade(const ColorImage& gt, const DegradationSpec& spec);

/// Per-image seed used by batch tools: seed XOR index.
constexpr std::uint64_t image_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return seed ^ index;
}

}  // namespace rawpipe
