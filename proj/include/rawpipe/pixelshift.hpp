// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include "rawpipe/image.hpp"

namespace rawpipe {

/// One exposure of a four-shot pixel-shift capture. The sensor is displaced by
/// (dy, dx) pixels, so sensor site (y, x) records the scene at
/// ((y + dy) mod H, (x + dx) mod W) through the filter color of (y, x).
struct ShiftedShot {
  BayerMosaic mosaic;
  int dy = 0;
  int dx = 0;
};

/// Sensor offsets in capture order.
inline constexpr std::array<std::array<int, 2>, 4> kPixelShiftOffsets = {
    {{0, 0}, {0, 1}, {1, 1}, {1, 0}}};

/// Simulates the four one-pixel-shifted exposures of a static scene.
std::array<ShiftedShot, 4> capture_shifts(const ColorImage& img,
                                          CfaPattern pattern = CfaPattern::RGGB);

/// Reassembles full color: R and B come from the single shot that saw them,
/// G is the mean of its two observations. Throws DimensionError on
/// inconsistent shapes and ParameterError if the offsets do not cover all four
/// CFA phases.
ColorImage merge_shifts(const std::array<ShiftedShot, 4>& shots);

/// Radial zone plate 0.5 + 0.5 cos(k r^2) replicated in all channels, with
/// the local frequency reaching `max_frequency` cycles/pixel at the corner.
ColorImage zone_plate(int size, double max_frequency = 0.5);

}  // namespace rawpipe
