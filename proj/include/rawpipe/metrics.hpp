// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "rawpipe/image.hpp"

namespace rawpipe {

/// Returned for identical images and used as the upper bound everywhere.
inline constexpr double kPsnrCapDb = 99.0;

/// 10 log10(1 / MSE) with peak 1.0, MSE over every value of every plane.
/// Capped at kPsnrCapDb. Throws DimensionError on shape mismatch.
double psnr(const PlanarImage& a, const PlanarImage& b);

struct SsimOptions {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

/// Mean SSIM with a Gaussian window, computed per plane over the valid
/// (unpadded) window positions and averaged across planes.
double ssim(const PlanarImage& a, const PlanarImage& b, const SsimOptions& opt = {});

struct ImageScore {
  std::string name;
  double psnr_db = 0.0;
  double ssim = 0.0;
};

struct MetricsReport {
  std::vector<ImageScore> images;
  double mean_psnr_db = 0.0;
  double mean_ssim = 0.0;
  double sigma = 0.0;
  int scale = 1;
  std::string method;

  /// Recomputes the arithmetic means from `images`.
  void finalize();
  /// name,psnr_db,ssim rows followed by a "mean" row.
  std::string to_csv() const;
};

}  // namespace rawpipe
