// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "rawpipe/image.hpp"

namespace rawpipe {

enum class DemosaicMethod { Bilinear, Malvar };

std::string to_string(DemosaicMethod m);
DemosaicMethod parse_demosaic_method(const std::string& s);

/// Missing samples are the mean of the 2 or 4 nearest same-channel sites;
/// native samples pass through. Borders use reflect-101 padding, which keeps
/// the CFA phase of reflected sites.
ColorImage demosaic_bilinear(const BayerMosaic& m);

/// Malvar-He-Cutler gradient-corrected linear interpolation (5x5 filters),
/// reflect-101 borders, output clamped to [0, 1].
ColorImage demosaic_malvar(const BayerMosaic& m);

ColorImage demosaic(const BayerMosaic& m, DemosaicMethod method);

/// Normalized 1-D Gaussian taps with radius ceil(3 * sigma).
std::vector<float> gaussian_taps(double sigma);

/// Separable Gaussian blur applied to each plane independently, reflect-101
/// borders. sigma == 0 returns the input unchanged.
PlanarImage gaussian_blur(const PlanarImage& img, double sigma);

ColorImage denoise_gaussian(const ColorImage& img, double sigma);
/// Blurs the four phase planes independently, so colors never mix.
PackedMosaic denoise_gaussian(const PackedMosaic& p, double sigma);

/// Catmull-Rom (a = -0.5) cubic kernel.
double cubic_weight(double x) noexcept;

/// Separable bicubic upsampling of every plane by an integer factor using the
/// half-pixel convention src = (dst + 0.5) / factor - 0.5 + offset. Offsets
/// are given per plane and axis in source-pixel units.
PlanarImage resize_bicubic(const PlanarImage& img, int factor,
                           const std::vector<double>& row_offset = {},
                           const std::vector<double>& col_offset = {});

ColorImage sr_bicubic(const ColorImage& img, int factor);

/// Upsamples each phase plane so the result is the packing of a mosaic that
/// is `factor` times larger. Each plane is resampled at the true positions of
/// its CFA sites in the larger mosaic, so the phase shift between the planes
/// is preserved instead of being smeared by a plane-agnostic grid.
PackedMosaic sr_bicubic(const PackedMosaic& p, int factor);

/// Per-axis sub-pixel offset for a phase plane with parity `phase` (0 or 1)
/// upsampled by `factor`: (1 - 1/factor) * (1/4 - phase/2).
double packed_phase_offset(int phase, int factor) noexcept;

}  // namespace rawpipe
