// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rawpipe/image.hpp"

namespace rawpipe {

/// Samples one channel per pixel according to the CFA parity at (y, x).
/// Pure subsampling: every output value is copied from the input.
BayerMosaic mosaic_from_color(const ColorImage& img, CfaPattern pattern = CfaPattern::RGGB);

/// Splits the mosaic into its four 2x2 phase planes:
///   R(j,i) = m(2j, 2i)      G1(j,i) = m(2j, 2i+1)
///   G2(j,i) = m(2j+1, 2i)   B(j,i)  = m(2j+1, 2i+1)
PackedMosaic pack(const BayerMosaic& m);

/// Exact inverse of pack.
BayerMosaic unpack(const PackedMosaic& p);

}  // namespace rawpipe
