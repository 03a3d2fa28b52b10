// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "rawpipe/degrade.hpp"

#include <algorithm>
#include <cmath>

#include "rawpipe/bayer.hpp"
#include "rawpipe/random.hpp"

namespace rawpipe {

void DegradationSpec::validate(int height, int width) const {
  if (scale < 1) throw ParameterError("scale must be >= 1, got " + std::to_string(scale));
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw ParameterError("sigma must be finite and >= 0");
  const int block = 2 * scale;
  if (height % block != 0 || width % block != 0)
    throw DimensionError("image " + std::to_string(height) + "x" + std::to_string(width) +
                         " is not divisible by 2*scale = " + std::to_string(block));
}

ColorImage downsample_avg(const ColorImage& img, int factor) {
  if (factor < 1) throw ParameterError("downsample factor must be >= 1");
  if (img.height() % factor != 0 || img.width() % factor != 0)
    throw DimensionError("downsample_avg: " + std::to_string(img.height()) + "x" +
                         std::to_string(img.width()) + " not divisible by " +
                         std::to_string(factor));
  if (factor == 1) return img;
  const int oh = img.height() / factor;
  const int ow = img.width() / factor;
  const double inv = 1.0 / (static_cast<double>(factor) * factor);
  ColorImage out(oh, ow);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        double acc = 0.0;
        for (int dy = 0; dy < factor; ++dy)
          for (int dx = 0; dx < factor; ++dx) acc += img.at(c, y * factor + dy, x * factor + dx);
        out.at(c, y, x) = static_cast<float>(acc * inv);
      }
    }
  }
  return out;
}

PlanarImage add_awgn(const PlanarImage& plane, double sigma255, std::uint64_t seed) {
  if (!(sigma255 >= 0.0) || !std::isfinite(sigma255))
    throw ParameterError("noise sigma must be finite and >= 0");
  if (sigma255 == 0.0) return plane;
  const double sigma = sigma255 / 255.0;
  const CounterRng rng(seed);
  PlanarImage out = plane;
  auto v = out.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double noisy = static_cast<double>(v[i]) + sigma * rng.normal(i);
    v[i] = static_cast<float>(std::clamp(noisy, 0.0, 1.0));
  }
  return out;
}

BayerMosaic add_awgn(const BayerMosaic& m, double sigma255, std::uint64_t seed) {
  return BayerMosaic(add_awgn(static_cast<const PlanarImage&>(m), sigma255, seed), m.pattern());
}

DegradedPair degrade(const ColorImage& gt, const DegradationSpec& spec) {
  spec.validate(gt.height(), gt.width());
  DegradedPair out;
  out.gt_hr_color = gt;
  out.gt_hr_packed = pack(mosaic_from_color(gt, spec.pattern));
  out.lr_color = downsample_avg(gt, spec.scale);
  out.lr_mosaic_clean = mosaic_from_color(out.lr_color, spec.pattern);
  out.lr_mosaic_noisy = add_awgn(out.lr_mosaic_clean, spec.sigma, spec.seed);
  out.noise_map = PlanarImage(1, out.lr_mosaic_clean.height() / 2,
                              out.lr_mosaic_clean.width() / 2,
                              static_cast<float>(spec.sigma / 255.0));
  return out;
}

}  // namespace rawpipe
