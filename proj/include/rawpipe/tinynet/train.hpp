// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rawpipe/degrade.hpp"
#include "rawpipe/image.hpp"
#include "rawpipe/tinynet/network.hpp"

namespace rawpipe::tinynet {

// ------------------------------------------------------------------- loss

template <class T>
struct LossResult {
  double total = 0.0;  // L = L_joint + lambda * L_sr
  double joint = 0.0;  // MSE on the RGB output
  double sr = 0.0;     // MSE on the packed x2 mosaic
  Tensor4<T> grad_color;
  Tensor4<T> grad_packed;
};

/// Mean-squared-error losses and their gradients with respect to both
/// predictions. Throws DimensionError on shape mismatch and NumericError on
/// non-finite inputs.
template <class T>
LossResult<T> loss_total(const Tensor4<T>& pred_color, const Tensor4<T>& gt_color,
                         const Tensor4<T>& pred_packed_hr, const Tensor4<T>& gt_packed_hr,
                         double lambda);

// ------------------------------------------------------------------- Adam

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <class T>
struct AdamState {
  std::int64_t step = 0;
  std::vector<std::vector<T>> m;
  std::vector<std::vector<T>> v;
};

/// One bias-corrected Adam update of every parameter from its gradient.
/// Throws NumericError, leaving parameters and state untouched, if any
/// gradient is non-finite.
template <class T>
void adam_step(const std::vector<Parameter<T>*>& params, AdamState<T>& state,
               const AdamConfig& cfg);

// --------------------------------------------------------------- training

struct TrainConfig {
  AdamConfig adam;
  int batch = 4;
  int hr_patch = 64;
  double lambda = 1.0;
  int steps = 200;
  std::uint64_t seed = 0;
  NetConfig net;

  /// Throws ParameterError on non-positive fields or when hr_patch is not a
  /// multiple of 4 * scale.
  void validate(int scale) const;
};

struct LossRecord {
  int step = 0;
  double total = 0.0;
  double joint = 0.0;
  double sr = 0.0;
};

struct TrainResult {
  JointNet<float> net;
  std::vector<LossRecord> curve;
};

/// step,L,L_joint,L_SR
std::string loss_curve_csv(const std::vector<LossRecord>& curve);

/// Mean total loss over curve[begin, end).
double window_mean(const std::vector<LossRecord>& curve, std::size_t begin, std::size_t end);

using StepCallback = std::function<void(const LossRecord&)>;

/// Trains the joint network end to end. Each step draws `batch` random HR
/// crops, degrades them with the given settings (noise seeded per crop and step), and
/// takes one Adam step on L. Throws NumericError naming the step if the loss
/// or a gradient becomes non-finite.
TrainResult train(const std::vector<ColorImage>& dataset, const TrainConfig& cfg,
                  const DegradationSpec& spec, const StepCallback& on_step = {});

// -------------------------------------------------------------- inference

struct TileOptions {
  /// Output-side tile size in LR mosaic pixels; 0 disables tiling.
  int tile = 0;
  /// Context kept around every tile, in LR mosaic pixels.
  int overlap = 8;
  /// Widen the context to receptive_radius() so tiles stitch exactly. With
  /// false, the context is exactly `overlap` and seams may differ slightly.
  bool exact = true;
};

/// pack -> F (with a constant sigma/255 noise map) -> C -> clamp to [0, 1].
/// Output is 2H x 2W RGB for an H x W mosaic.
ColorImage infer(const BayerMosaic& noisy_lr, double sigma255, JointNet<float>& net,
                 const TileOptions& tiles = {});

/// Effective per-side context used for tiled inference.
int tile_margin(const NetConfig& cfg, const TileOptions& tiles);

// ------------------------------------------------------------ conversions

template <class T>
Tensor4<T> to_tensor(const PlanarImage& img);

/// Stacks equally shaped images into one batch.
template <class T>
Tensor4<T> to_tensor(const std::vector<const PlanarImage*>& imgs);

/// Sample n of a 3-channel tensor.
template <class T>
ColorImage to_color(const Tensor4<T>& t, int n = 0);

}  // namespace rawpipe::tinynet
