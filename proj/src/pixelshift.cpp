// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "rawpipe/pixelshift.hpp"

#include <cmath>
#include <numbers>

namespace rawpipe {

namespace {
int wrap(int v, int n) { return ((v % n) + n) % n; }
}  // namespace

std::array<ShiftedShot, 4> capture_shifts(const ColorImage& img, CfaPattern pattern) {
  require_valid_color(img, "capture_shifts");
  const int h = img.height();
  const int w = img.width();
  std::array<ShiftedShot, 4> shots;
  for (std::size_t k = 0; k < shots.size(); ++k) {
    const int dy = kPixelShiftOffsets[k][0];
    const int dx = kPixelShiftOffsets[k][1];
    BayerMosaic m(h, w, pattern);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        m(y, x) = img.at(cfa_channel(pattern, y, x), wrap(y + dy, h), wrap(x + dx, w));
    shots[k] = ShiftedShot{std::move(m), dy, dx};
  }
  return shots;
}

ColorImage merge_shifts(const std::array<ShiftedShot, 4>& shots) {
  const BayerMosaic& ref = shots[0].mosaic;
  bool phase_seen[2][2] = {{false, false}, {false, false}};
  for (const auto& s : shots) {
    if (!s.mosaic.same_shape(ref) || s.mosaic.pattern() != ref.pattern())
      throw DimensionError("merge_shifts: shots differ in shape or pattern");
    phase_seen[wrap(s.dy, 2)][wrap(s.dx, 2)] = true;
  }
  for (auto& row : phase_seen)
    for (bool seen : row)
      if (!seen) throw ParameterError("merge_shifts: offsets do not cover all four CFA phases");

  const int h = ref.height();
  const int w = ref.width();
  ColorImage out(h, w);
  PlanarImage green_sum(1, h, w);
  for (const auto& s : shots) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        // Scene point (Y, X) was seen by sensor site (Y - dy, X - dx).
        const int sy = wrap(y - s.dy, h);
        const int sx = wrap(x - s.dx, w);
        const int c = cfa_channel(ref.pattern(), sy, sx);
        const float v = s.mosaic(sy, sx);
        if (c == 1)
          green_sum.at(0, y, x) += v;
        else
          out.at(c, y, x) = v;
      }
    }
  }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at(1, y, x) = green_sum.at(0, y, x) * 0.5f;
  return out;
}

ColorImage zone_plate(int size, double max_frequency) {
  ColorImage img(size, size);
  const double c = 0.5 * (size - 1);
  const double rmax = std::sqrt(2.0) * c;
  // Local frequency of cos(k r^2) is k r / pi cycles per pixel.
  const double k = std::numbers::pi * max_frequency / rmax;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dy = y - c;
      const double dx = x - c;
      const float v = static_cast<float>(0.5 + 0.5 * std::cos(k * (dx * dx + dy * dy)));
      for (int ch = 0; ch < 3; ++ch) img.at(ch, y, x) = v;
    }
  }
  return img;
}

}  // namespace rawpipe
