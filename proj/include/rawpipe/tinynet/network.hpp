// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rawpipe/tinynet/layers.hpp"

namespace rawpipe::tinynet {

struct NetConfig {
  int feat = 32;
  int growth = 16;
  int blocks = 2;
  double beta = 0.2;

  /// Throws ParameterError unless all sizes are positive and beta is in (0, 1].
  void validate() const;
  bool operator==(const NetConfig&) const = default;
};

/// Five 3x3 convs with dense connections; leaky ReLU after the first four.
/// Output is x + beta * conv5([x, c1, c2, c3, c4]).
template <class T>
class DenseBlock {
 public:
  DenseBlock(const std::string& name, const NetConfig& cfg);

  void init(RngStream& rng);
  Tensor4<T> forward(const Tensor4<T>& x, bool keep_cache);
  Tensor4<T> backward(const Tensor4<T>& dy);
  void collect(std::vector<Parameter<T>*>& out);
  void clear_cache() { cache_ = Tensor4<T>(); }

 private:
  int feat_;
  int growth_;
  T beta_;
  std::vector<Conv2d<T>> convs_;
  Tensor4<T> cache_;  // [x, c1..c4], post-activation
};

/// Three dense blocks in sequence under one more scaled residual.
template <class T>
class ResidualInResidual {
 public:
  ResidualInResidual(const std::string& name, const NetConfig& cfg);

  void init(RngStream& rng);
  Tensor4<T> forward(const Tensor4<T>& x, bool keep_cache);
  Tensor4<T> backward(const Tensor4<T>& dy);
  void collect(std::vector<Parameter<T>*>& out);
  void clear_cache();

 private:
  T beta_;
  std::vector<DenseBlock<T>> blocks_;
};

/// conv_first -> RRDB x B -> trunk conv (+ long skip) -> conv to 4*feat ->
/// depth_to_space(2) -> leaky ReLU -> conv_last. Maps N x Cin x h x w to
/// N x Cout x 2h x 2w.
template <class T>
class UpscaleNet {
 public:
  UpscaleNet(const std::string& name, int in_channels, int out_channels, const NetConfig& cfg);

  int in_channels() const noexcept { return in_ch_; }
  int out_channels() const noexcept { return out_ch_; }

  void init(RngStream& rng);
  /// With keep_cache the activations needed by backward() are retained.
  Tensor4<T> forward(const Tensor4<T>& x, bool keep_cache);
  /// Accumulates parameter gradients; returns dL/dx when need_input_grad.
  /// Throws NumericError("missing cache") if forward was not cached.
  Tensor4<T> backward(const Tensor4<T>& dy, bool need_input_grad);
  void collect(std::vector<Parameter<T>*>& out);
  void clear_cache();

 private:
  struct Cache {
    bool valid = false;
    Tensor4<T> x, fea, trunk_in, body, up;
  };

  int in_ch_;
  int out_ch_;
  NetConfig cfg_;
  Conv2d<T> conv_first_;
  std::vector<ResidualInResidual<T>> trunk_;
  Conv2d<T> conv_trunk_;
  Conv2d<T> conv_up_;
  Conv2d<T> conv_last_;
  Cache cache_;
};

/// Joint model: F maps (packed LR mosaic, noise map) to the packed x2 mosaic,
/// C maps the packed mosaic to full-resolution RGB.
template <class T>
class JointNet {
 public:
  explicit JointNet(const NetConfig& cfg = {});

  const NetConfig& config() const noexcept { return cfg_; }
  UpscaleNet<T>& net_f() noexcept { return f_; }
  UpscaleNet<T>& net_c() noexcept { return c_; }

  void init(std::uint64_t seed);

  /// (N,4,h,w) + (N,1,h,w) -> (N,4,2h,2w).
  Tensor4<T> forward_f(const Tensor4<T>& packed_lr, const Tensor4<T>& noise_map,
                       bool keep_cache = false);
  /// (N,4,h,w) -> (N,3,2h,2w).
  Tensor4<T> forward_c(const Tensor4<T>& packed_sr, bool keep_cache = false);

  /// All parameters, F first then C, in a fixed order.
  std::vector<Parameter<T>*> parameters();
  void zero_grad();
  void clear_cache();

  /// Parameter values converted to another precision (same names and order).
  template <class U>
  void copy_from(JointNet<U>& other);

 private:
  NetConfig cfg_;
  UpscaleNet<T> f_;
  UpscaleNet<T> c_;
};

/// Radius, in LR mosaic pixels, beyond which an input pixel cannot influence
/// a JointNet output pixel. Rounded up to an even number.
int receptive_radius(const NetConfig& cfg);

template <class T>
template <class U>
void JointNet<T>::copy_from(JointNet<U>& other) {
  auto dst = parameters();
  auto src = other.parameters();
  if (dst.size() != src.size()) throw DimensionError("copy_from: parameter count mismatch");
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (dst[i]->dims != src[i]->dims) throw DimensionError("copy_from: " + dst[i]->name);
    for (std::size_t j = 0; j < dst[i]->size(); ++j)
      dst[i]->value[j] = static_cast<T>(src[i]->value[j]);
  }
}

}  // namespace rawpipe::tinynet
