// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

// Fits the DN conditioning gain on held-out validation images. The objective
// is the denoiser's own job: PSNR of the blurred noisy LR phase planes
// against the clean ones. The ordering scores are printed for reference only.

#include <cstdio>
#include <string>
#include <vector>

#include "rawpipe/bayer.hpp"
#include "rawpipe/degrade.hpp"
#include "rawpipe/io.hpp"
#include "rawpipe/metrics.hpp"
#include "rawpipe/pipeline.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: calibrate_denoise SIGMA IMAGE...\n");
    return 2;
  }
  const double sigma = std::stod(argv[1]);
  std::vector<rawpipe::ColorImage> images;
  for (int i = 2; i < argc; ++i) images.push_back(rawpipe::io::read_color(argv[i]));

  double best_gain = 0.0;
  double best_psnr = -1.0;
  for (double gain = 0.0; gain <= 60.0; gain += 1.0) {
    double score = 0.0;
    for (std::size_t i = 0; i < images.size(); ++i) {
      rawpipe::DegradationSpec spec;
      spec.sigma = sigma;
      spec.seed = rawpipe::image_seed(0, i);
      const auto pair = rawpipe::degrade(images[i], spec);
      const double sf = rawpipe::denoise_sigma_for(sigma, rawpipe::Domain::Mosaic, 1, gain);
      const auto den = rawpipe::denoise_gaussian(rawpipe::pack(pair.lr_mosaic_noisy), sf);
      score += rawpipe::psnr(den, rawpipe::pack(pair.lr_mosaic_clean));
    }
    score /= static_cast<double>(images.size());
    std::printf("gain %5.1f  sigma_f(packed LR) %.3f  denoise PSNR %.4f\n", gain,
                rawpipe::denoise_sigma_for(sigma, rawpipe::Domain::Mosaic, 1, gain), score);
    if (score > best_psnr) {
      best_psnr = score;
      best_gain = gain;
    }
  }
  std::printf("best gain: %.1f (%.4f dB)\n", best_gain, best_psnr);

  for (auto dm : {rawpipe::DemosaicMethod::Bilinear, rawpipe::DemosaicMethod::Malvar}) {
    rawpipe::AblationConfig cfg;
    cfg.sigma = sigma;
    cfg.demosaic = dm;
    cfg.denoise_gain = best_gain;
    const auto report = rawpipe::ablate_orders(images, cfg);
    std::printf("%s:", rawpipe::to_string(dm).c_str());
    for (const auto& r : report.rows) std::printf("  %s %.3f", r.ordering.c_str(), r.mean_psnr_db);
    std::printf("\n");
  }
  return 0;
}
