// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "rawpipe/image.hpp"

namespace rawpipe::io {

/// Reads an 8- or 16-bit PNG (gray, RGB, RGBA) or binary PGM/PPM into [0, 1]
/// floats. Integer samples are scaled by 1/255 or 1/65535.
PlanarImage read_image(const std::filesystem::path& path);

/// Like read_image but requires three channels (RGBA drops alpha).
ColorImage read_color(const std::filesystem::path& path);

/// Single-channel file read as an RGGB mosaic.
BayerMosaic read_mosaic(const std::filesystem::path& path);

/// Writes values clamped to [0, 1] and rounded to `bit_depth` (8 or 16).
/// .png accepts 1, 3 or 4 planes; .pgm 1 plane; .ppm 3 planes.
void write_image(const std::filesystem::path& path, const PlanarImage& img, int bit_depth = 16);

bool is_image_file(const std::filesystem::path& path);

}  // namespace rawpipe::io
