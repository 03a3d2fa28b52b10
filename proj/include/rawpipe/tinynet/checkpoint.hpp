// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "rawpipe/tinynet/network.hpp"

namespace rawpipe::tinynet {

/// Checkpoint layout, all integers little-endian:
///
///   char[8]  magic "RPJNET\0\0"
///   u32      version (kCheckpointVersion)
///   u32      feat, growth, blocks
///   f64      beta
///   u32      tensor count
///   per tensor:
///     u32 name length, name bytes (no terminator)
///     u32 ndims, u32 dims[ndims]
///     f32 values[prod(dims)]
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, JointNet<float>& net);

/// Throws FormatError on bad magic, unknown version, or any tensor whose name
/// or shape does not match the network built from the stored config.
JointNet<float> load_checkpoint(const std::string& path);

}  // namespace rawpipe::tinynet
