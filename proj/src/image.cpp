// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "rawpipe/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace rawpipe {

std::string to_string(CfaPattern p) {
  switch (p) {
    case CfaPattern::RGGB: return "RGGB";
    case CfaPattern::GRBG: return "GRBG";
    case CfaPattern::GBRG: return "GBRG";
    case CfaPattern::BGGR: return "BGGR";
  }
  return "?";
}

CfaPattern parse_cfa_pattern(const std::string& s) {
  std::string u = s;
  std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::toupper(c); });
  if (u == "RGGB") return CfaPattern::RGGB;
  if (u == "GRBG" || u == "GBRG" || u == "BGGR")
    throw ParameterError("CFA pattern " + u + " is reserved but not implemented; use RGGB");
  throw ParameterError("unknown CFA pattern '" + s + "'");
}

int cfa_channel(CfaPattern p, int y, int x) {
  const int py = y & 1;
  const int px = x & 1;
  switch (p) {
    case CfaPattern::RGGB: return (py == 0) ? (px == 0 ? 0 : 1) : (px == 0 ? 1 : 2);
    case CfaPattern::GRBG: return (py == 0) ? (px == 0 ? 1 : 0) : (px == 0 ? 2 : 1);
    case CfaPattern::GBRG: return (py == 0) ? (px == 0 ? 1 : 2) : (px == 0 ? 0 : 1);
    case CfaPattern::BGGR: return (py == 0) ? (px == 0 ? 2 : 1) : (px == 0 ? 1 : 0);
  }
  return 1;
}

PlanarImage::PlanarImage(int channels, int height, int width, float fill)
    : channels_(channels), height_(height), width_(width) {
  if (channels < 0 || height < 0 || width < 0)
    throw DimensionError("negative image dimensions");
  data_.assign(static_cast<std::size_t>(channels) * height * width, fill);
}

bool PlanarImage::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

bool PlanarImage::operator==(const PlanarImage& o) const noexcept {
  if (!same_shape(o)) return false;
  return data_.empty() ||
         std::memcmp(data_.data(), o.data_.data(), data_.size() * sizeof(float)) == 0;
}

void PlanarImage::clamp01() noexcept {
  for (auto& v : data_) v = std::clamp(v, 0.0f, 1.0f);
}

ColorImage::ColorImage(PlanarImage img) : PlanarImage(std::move(img)) {
  if (channels() != 3) throw DimensionError("ColorImage needs 3 planes, got " +
                                            std::to_string(channels()));
}

BayerMosaic::BayerMosaic(int height, int width, CfaPattern pattern, float fill)
    : PlanarImage(1, height, width, fill), pattern_(pattern) {
  if (height % 2 != 0 || width % 2 != 0)
    throw DimensionError("mosaic dimensions must be even, got " + std::to_string(height) + "x" +
                         std::to_string(width));
}

BayerMosaic::BayerMosaic(PlanarImage img, CfaPattern pattern)
    : PlanarImage(std::move(img)), pattern_(pattern) {
  if (channels() != 1) throw DimensionError("BayerMosaic needs exactly one plane");
  if (height() % 2 != 0 || width() % 2 != 0)
    throw DimensionError("mosaic dimensions must be even");
}

PackedMosaic::PackedMosaic(int half_height, int half_width, CfaPattern pattern, float fill)
    : PlanarImage(4, half_height, half_width, fill), pattern_(pattern) {}

PackedMosaic::PackedMosaic(PlanarImage img, CfaPattern pattern)
    : PlanarImage(std::move(img)), pattern_(pattern) {
  if (channels() != 4) throw DimensionError("PackedMosaic needs exactly four planes");
}

void require_valid_color(const ColorImage& img, const char* what) {
  if (img.height() % 2 != 0 || img.width() % 2 != 0)
    throw DimensionError(std::string(what) + ": image dimensions must be even, got " +
                         std::to_string(img.height()) + "x" + std::to_string(img.width()));
  if (img.height() < 4 || img.width() < 4)
    throw DimensionError(std::string(what) + ": image must be at least 4x4");
}

int reflect101(int i, int n) noexcept {
  if (n <= 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

}  // namespace rawpipe
