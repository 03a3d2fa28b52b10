// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rawpipe/error.hpp"

namespace rawpipe {

/// Color filter array layout of the top-left 2x2 cell, read row-major.
/// Only RGGB is implemented; the other tags are reserved.
enum class CfaPattern { RGGB, GRBG, GBRG, BGGR };

std::string to_string(CfaPattern p);
CfaPattern parse_cfa_pattern(const std::string& s);

/// Channel index (0=R, 1=G, 2=B) recorded at mosaic site (y, x).
int cfa_channel(CfaPattern p, int y, int x);

/// Dense planar float image: `channels` planes of `height x width` values,
/// stored plane after plane, each plane row-major.
class PlanarImage {
 public:
  PlanarImage() = default;
  PlanarImage(int channels, int height, int width, float fill = 0.0f);

  int channels() const noexcept { return channels_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  std::size_t size() const noexcept { return data_.size(); }

  float& at(int c, int y, int x) noexcept { return data_[index(c, y, x)]; }
  float at(int c, int y, int x) const noexcept { return data_[index(c, y, x)]; }

  std::span<float> plane(int c) noexcept {
    return {data_.data() + static_cast<std::size_t>(c) * plane_size(), plane_size()};
  }
  std::span<const float> plane(int c) const noexcept {
    return {data_.data() + static_cast<std::size_t>(c) * plane_size(), plane_size()};
  }

  std::span<float> values() noexcept { return data_; }
  std::span<const float> values() const noexcept { return data_; }

  bool all_finite() const noexcept;
  bool same_shape(const PlanarImage& o) const noexcept {
    return channels_ == o.channels_ && height_ == o.height_ && width_ == o.width_;
  }
  // Bit-exact equality of shape and values.
  bool operator==(const PlanarImage& o) const noexcept;

  void clamp01() noexcept;

 private:
  std::size_t index(int c, int y, int x) const noexcept {
    return (static_cast<std::size_t>(c) * height_ + static_cast<std::size_t>(y)) * width_ +
           static_cast<std::size_t>(x);
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

/// Three planes in R, G, B order, linear light in [0, 1].
class ColorImage : public PlanarImage {
 public:
  ColorImage() = default;
  ColorImage(int height, int width, float fill = 0.0f) : PlanarImage(3, height, width, fill) {}
  // Wraps a 3-plane image; throws DimensionError for any other channel count.
  explicit ColorImage(PlanarImage img);
};

/// Single CFA-sampled plane. Dimensions are always even.
class BayerMosaic : public PlanarImage {
 public:
  BayerMosaic() = default;
  BayerMosaic(int height, int width, CfaPattern pattern = CfaPattern::RGGB, float fill = 0.0f);
  BayerMosaic(PlanarImage img, CfaPattern pattern);

  CfaPattern pattern() const noexcept { return pattern_; }
  float& operator()(int y, int x) noexcept { return at(0, y, x); }
  float operator()(int y, int x) const noexcept { return at(0, y, x); }

  bool operator==(const BayerMosaic& o) const noexcept {
    return pattern_ == o.pattern_ && PlanarImage::operator==(o);
  }

 private:
  CfaPattern pattern_ = CfaPattern::RGGB;
};

/// The four half-resolution phase planes of a mosaic. For RGGB the order is
/// (R, G1, G2, B) where G1 shares a row with R.
class PackedMosaic : public PlanarImage {
 public:
  static constexpr int kR = 0;
  static constexpr int kG1 = 1;
  static constexpr int kG2 = 2;
  static constexpr int kB = 3;

  PackedMosaic() = default;
  PackedMosaic(int half_height, int half_width, CfaPattern pattern = CfaPattern::RGGB,
               float fill = 0.0f);
  PackedMosaic(PlanarImage img, CfaPattern pattern);

  CfaPattern pattern() const noexcept { return pattern_; }
  bool operator==(const PackedMosaic& o) const noexcept {
    return pattern_ == o.pattern_ && PlanarImage::operator==(o);
  }

 private:
  CfaPattern pattern_ = CfaPattern::RGGB;
};

/// Throws DimensionError unless the color image satisfies the carrier
/// invariants (even dimensions, each at least 4).
void require_valid_color(const ColorImage& img, const char* what);

/// Reflect-101 index mapping ("dcb|abcd|cba"). Handles offsets farther than
/// the extent by repeated reflection; preserves index parity.
int reflect101(int i, int n) noexcept;

}  // namespace rawpipe
