// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "rawpipe/bayer.hpp"

namespace rawpipe {

BayerMosaic mosaic_from_color(const ColorImage& img, CfaPattern pattern) {
  if (img.height() % 2 != 0 || img.width() % 2 != 0)
    throw DimensionError("mosaic_from_color: dimensions must be even, got " +
                         std::to_string(img.height()) + "x" + std::to_string(img.width()));
  BayerMosaic m(img.height(), img.width(), pattern);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) m(y, x) = img.at(cfa_channel(pattern, y, x), y, x);
  return m;
}

PackedMosaic pack(const BayerMosaic& m) {
  const int hh = m.height() / 2;
  const int hw = m.width() / 2;
  PackedMosaic p(hh, hw, m.pattern());
  for (int j = 0; j < hh; ++j) {
    for (int i = 0; i < hw; ++i) {
      p.at(PackedMosaic::kR, j, i) = m(2 * j, 2 * i);
      p.at(PackedMosaic::kG1, j, i) = m(2 * j, 2 * i + 1);
      p.at(PackedMosaic::kG2, j, i) = m(2 * j + 1, 2 * i);
      p.at(PackedMosaic::kB, j, i) = m(2 * j + 1, 2 * i + 1);
    }
  }
  return p;
}

BayerMosaic unpack(const PackedMosaic& p) {
  BayerMosaic m(2 * p.height(), 2 * p.width(), p.pattern());
  for (int j = 0; j < p.height(); ++j) {
    for (int i = 0; i < p.width(); ++i) {
      m(2 * j, 2 * i) = p.at(PackedMosaic::kR, j, i);
      m(2 * j, 2 * i + 1) = p.at(PackedMosaic::kG1, j, i);
      m(2 * j + 1, 2 * i) = p.at(PackedMosaic::kG2, j, i);
      m(2 * j + 1, 2 * i + 1) = p.at(PackedMosaic::kB, j, i);
    }
  }
  return m;
}

}  // namespace rawpipe
