// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "rawpipe/random.hpp"
#include "rawpipe/tinynet/tensor.hpp"

namespace rawpipe::tinynet {

inline constexpr double kLeakySlope = 0.2;

/// Learnable tensor with its gradient accumulator.
template <class T>
struct Parameter {
  std::string name;
  std::vector<int> dims;
  std::vector<T> value;
  std::vector<T> grad;

  std::size_t size() const noexcept { return value.size(); }
  void zero_grad() { std::fill(grad.begin(), grad.end(), T(0)); }
};

/// 3x3 convolution, stride 1, zero padding 1. Weights are Cout x Cin x 3 x 3.
///
/// The layer reads a contiguous channel range of its input tensor and writes
/// a contiguous channel range of its output tensor, which lets dense blocks
/// share one growing feature buffer without concatenation copies. Internally
/// each sample is lowered to an im2col matrix and multiplied by the weight
/// matrix with the dispatched GEMM kernel.
template <class T>
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(std::string name, int cin, int cout);

  int cin() const noexcept { return cin_; }
  int cout() const noexcept { return cout_; }
  Parameter<T>& weight() noexcept { return weight_; }
  Parameter<T>& bias() noexcept { return bias_; }
  const Parameter<T>& weight() const noexcept { return weight_; }
  const Parameter<T>& bias() const noexcept { return bias_; }

  /// Fan-in scaled normal init, std = gain * sqrt(2 / (9 * Cin)); zero bias.
  void init(RngStream& rng, double gain);

  /// out[:, out_c0 : out_c0 + Cout] = conv(in[:, in_c0 : in_c0 + Cin]).
  void forward(const Tensor4<T>& in, int in_c0, Tensor4<T>& out, int out_c0) const;

  /// Accumulates parameter gradients and, if `din` is non-null, adds the
  /// input gradient into din[:, din_c0 : din_c0 + Cin].
  void backward(const Tensor4<T>& in, int in_c0, const Tensor4<T>& dout, int dout_c0,
                Tensor4<T>* din, int din_c0);

 private:
  int cin_ = 0;
  int cout_ = 0;
  Parameter<T> weight_;
  Parameter<T> bias_;
};

/// In-place leaky ReLU on channels [c0, c0 + count).
template <class T>
void leaky_relu(Tensor4<T>& x, int c0, int count);

/// Multiplies grad[:, g0 : g0 + count] by the leaky-ReLU derivative, read off
/// the post-activation values post[:, p0 : p0 + count] (positive output iff
/// positive input).
template <class T>
void leaky_relu_backward(const Tensor4<T>& post, int p0, Tensor4<T>& grad, int g0, int count);

/// (N, C*r*r, H, W) -> (N, C, H*r, W*r) with
/// out[n][c][h*r + i][w*r + j] = in[n][c*r*r + i*r + j][h][w].
template <class T>
Tensor4<T> depth_to_space(const Tensor4<T>& in, int r);

/// Exact inverse of depth_to_space.
template <class T>
Tensor4<T> space_to_depth(const Tensor4<T>& in, int r);

}  // namespace rawpipe::tinynet
