// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rawpipe/classical.hpp"
#include "rawpipe/image.hpp"

namespace rawpipe {

enum class StageKind { Denoise, SuperResolve, Demosaic };
enum class Domain { Mosaic, Color };

std::string to_string(StageKind k);  // "DN", "SR", "DM"
std::string to_string(Domain d);

/// Gain of the denoiser's noise-conditioning rule, fitted once on a held-out
/// validation image (tools/calibrate_denoise) and frozen. See
/// denoise_sigma_for().
inline constexpr double kDenoiseGain = 20.0;

/// Blur width (in pixels of the current domain) used by a DN stage given the
/// input noise level on the 0-255 scale:
///   sigma_f = gain * (noise_sigma255 / 255) * density
/// where density is the sampling density of the domain relative to the LR
/// mosaic: scale / 2 for packed phase planes, scale for color images.
double denoise_sigma_for(double noise_sigma255, Domain domain, int scale,
                         double gain = kDenoiseGain);

struct Stage {
  StageKind kind = StageKind::Denoise;
  // SR: integer factor.
  int factor = 2;
  // DM: interpolation method.
  DemosaicMethod method = DemosaicMethod::Bilinear;
  // DN: conditioning gain; negative means "use an explicit blur sigma_f".
  double gain = kDenoiseGain;
  double sigma_f = 0.0;

  static Stage denoise(double gain = kDenoiseGain);
  static Stage denoise_fixed(double sigma_f);
  static Stage super_resolve(int factor);
  static Stage demosaic(DemosaicMethod method);
};

struct SignalState {
  Domain domain = Domain::Mosaic;
  int scale = 1;
};

struct PipelineSpec {
  std::vector<Stage> stages;
  int target_scale = 2;

  /// "DN->SR->DM" style label.
  std::string label() const;
};

enum class ValidationCode {
  Ok,
  Empty,
  MissingDemosaic,
  DuplicateStage,
  DomainMismatch,
  ScaleMismatch,
  InvalidParameter,
};

struct Validation {
  ValidationCode code = ValidationCode::Ok;
  std::string message;
  bool ok() const noexcept { return code == ValidationCode::Ok; }
};

/// Checks the stage list against the domain state machine: starts at
/// (mosaic, 1), DM flips mosaic to color exactly once, at most one DN and one
/// SR, and the terminal state must be (color, target_scale).
Validation validate(const PipelineSpec& spec);

/// Applies the stages left to right to `input`. Mosaic-domain DN and SR work
/// on the packed phase planes; DN stages are conditioned on noise_sigma255.
/// Throws ParameterError if validate() rejects the stages.
ColorImage run(const PipelineSpec& spec, const BayerMosaic& input, double noise_sigma255);

/// Six orderings of {DN, SR, DM}.
std::vector<std::array<StageKind, 3>> all_orderings();

struct AblationConfig {
  double sigma = 10.0;  // 0-255 scale
  int scale = 2;
  DemosaicMethod demosaic = DemosaicMethod::Bilinear;
  double denoise_gain = kDenoiseGain;
  std::uint64_t seed = 0;
  int jobs = 1;

  PipelineSpec make_spec(const std::array<StageKind, 3>& order) const;
};

struct OrderingResult {
  std::string ordering;
  double mean_psnr_db = 0.0;
  double mean_ssim = 0.0;
  std::vector<double> psnr_db;  // per image, dataset order
  std::vector<double> ssim;
};

struct OrderingReport {
  std::vector<OrderingResult> rows;  // sorted by mean PSNR, descending
  /// Partially or fully joint variants ("DN+SR->DM", ...). Classical
  /// operators cannot be fused, so these need trained network weights.
  std::vector<std::string> joint_rows_requiring_weights;
  double sigma = 0.0;
  int scale = 1;
  int n_images = 0;

  const OrderingResult& find(const std::string& ordering) const;
  /// ordering,mean_psnr_db,mean_ssim,n_images,sigma,scale
  std::string to_csv() const;
};

/// Degrades every ground-truth image (seed XOR image index), runs all six
/// orderings, and scores each output against the ground truth.
OrderingReport ablate_orders(const std::vector<ColorImage>& dataset, const AblationConfig& cfg);

}  // namespace rawpipe
