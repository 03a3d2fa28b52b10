// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "rawpipe/tinynet/network.hpp"

#include <cmath>

namespace rawpipe::tinynet {
namespace {

constexpr double kResidualInitScale = 0.1;

// a += s * b over the whole tensor.
template <class T>
void add_scaled(Tensor4<T>& a, const Tensor4<T>& b, T s) {
  T* pa = a.data();
  const T* pb = b.data();
  for (std::size_t i = 0; i < a.size(); ++i) pa[i] += s * pb[i];
}

// Copies channels [src_c0, src_c0 + count) of src into dst starting at dst_c0.
template <class T>
void copy_channels(const Tensor4<T>& src, int src_c0, Tensor4<T>& dst, int dst_c0, int count) {
  const std::size_t len = static_cast<std::size_t>(count) * src.plane();
  for (int n = 0; n < src.n(); ++n)
    std::copy_n(src.ptr(n, src_c0), len, dst.ptr(n, dst_c0));
}

}  // namespace

void NetConfig::validate() const {
  if (feat <= 0 || growth <= 0 || blocks <= 0)
    throw ParameterError("network feat, growth and blocks must be positive");
  if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("residual scale beta must be in (0, 1]");
}

int receptive_radius(const NetConfig& cfg) {
  // Each UpscaleNet stacks 15B + 3 convs at its input resolution and one more
  // at twice that resolution. F runs on packed LR planes (2 mosaic px per
  // sample), C on packed HR planes (1 mosaic px per sample).
  const double body = 15.0 * cfg.blocks + 3.0;
  const double f = 2.0 * body + 1.0;
  const double c = 1.0 * body + 0.5;
  const int r = static_cast<int>(std::ceil(f + c));
  return r + (r & 1);
}

// ---------------------------------------------------------------- DenseBlock

template <class T>
DenseBlock<T>::DenseBlock(const std::string& name, const NetConfig& cfg)
    : feat_(cfg.feat), growth_(cfg.growth), beta_(static_cast<T>(cfg.beta)) {
  for (int i = 0; i < 4; ++i)
    convs_.emplace_back(name + ".conv" + std::to_string(i + 1), feat_ + i * growth_, growth_);
  convs_.emplace_back(name + ".conv5", feat_ + 4 * growth_, feat_);
}

template <class T>
void DenseBlock<T>::init(RngStream& rng) {
  for (int i = 0; i < 5; ++i) convs_[i].init(rng, i == 4 ? kResidualInitScale : 1.0);
}

template <class T>
Tensor4<T> DenseBlock<T>::forward(const Tensor4<T>& x, bool keep_cache) {
  if (x.c() != feat_) throw DimensionError("dense block input " + x.shape_string());
  Tensor4<T> buf(x.n(), feat_ + 4 * growth_, x.h(), x.w());
  copy_channels(x, 0, buf, 0, feat_);
  for (int i = 0; i < 4; ++i) {
    const int c0 = feat_ + i * growth_;
    convs_[i].forward(buf, 0, buf, c0);
    leaky_relu(buf, c0, growth_);
  }
  Tensor4<T> y(x.n(), feat_, x.h(), x.w());
  convs_[4].forward(buf, 0, y, 0);
  T* py = y.data();
  const T* px = x.data();
  for (std::size_t i = 0; i < y.size(); ++i) py[i] = px[i] + beta_ * py[i];
  if (keep_cache) cache_ = std::move(buf);
  return y;
}

template <class T>
Tensor4<T> DenseBlock<T>::backward(const Tensor4<T>& dy) {
  if (cache_.empty()) throw NumericError("dense block backward: missing cache");
  if (dy.n() != cache_.n() || dy.c() != feat_ || dy.h() != cache_.h() || dy.w() != cache_.w())
    throw DimensionError("dense block backward grad " + dy.shape_string());
  Tensor4<T> dbuf(cache_.n(), cache_.c(), cache_.h(), cache_.w());
  copy_channels(dy, 0, dbuf, 0, feat_);
  Tensor4<T> dres = dy;
  for (auto& v : dres.values()) v *= beta_;
  convs_[4].backward(cache_, 0, dres, 0, &dbuf, 0);
  for (int i = 3; i >= 0; --i) {
    const int c0 = feat_ + i * growth_;
    leaky_relu_backward(cache_, c0, dbuf, c0, growth_);
    convs_[i].backward(cache_, 0, dbuf, c0, &dbuf, 0);
  }
  Tensor4<T> dx(dy.n(), feat_, dy.h(), dy.w());
  copy_channels(dbuf, 0, dx, 0, feat_);
  return dx;
}

template <class T>
void DenseBlock<T>::collect(std::vector<Parameter<T>*>& out) {
  for (auto& c : convs_) {
    out.push_back(&c.weight());
    out.push_back(&c.bias());
  }
}

// -------------------------------------------------------- ResidualInResidual

template <class T>
ResidualInResidual<T>::ResidualInResidual(const std::string& name, const NetConfig& cfg)
    : beta_(static_cast<T>(cfg.beta)) {
  for (int i = 0; i < 3; ++i) blocks_.emplace_back(name + ".rdb" + std::to_string(i + 1), cfg);
}

template <class T>
void ResidualInResidual<T>::init(RngStream& rng) {
  for (auto& b : blocks_) b.init(rng);
}

template <class T>
Tensor4<T> ResidualInResidual<T>::forward(const Tensor4<T>& x, bool keep_cache) {
  Tensor4<T> h = blocks_[0].forward(x, keep_cache);
  h = blocks_[1].forward(h, keep_cache);
  h = blocks_[2].forward(h, keep_cache);
  Tensor4<T> y = x;
  add_scaled(y, h, beta_);
  return y;
}

template <class T>
Tensor4<T> ResidualInResidual<T>::backward(const Tensor4<T>& dy) {
  Tensor4<T> g = dy;
  for (auto& v : g.values()) v *= beta_;
  g = blocks_[2].backward(g);
  g = blocks_[1].backward(g);
  g = blocks_[0].backward(g);
  add_scaled(g, dy, T(1));
  return g;
}

template <class T>
void ResidualInResidual<T>::collect(std::vector<Parameter<T>*>& out) {
  for (auto& b : blocks_) b.collect(out);
}

template <class T>
void ResidualInResidual<T>::clear_cache() {
  for (auto& b : blocks_) b.clear_cache();
}

// ---------------------------------------------------------------- UpscaleNet

template <class T>
UpscaleNet<T>::UpscaleNet(const std::string& name, int in_channels, int out_channels,
                          const NetConfig& cfg)
    : in_ch_(in_channels), out_ch_(out_channels), cfg_(cfg) {
  cfg.validate();
  conv_first_ = Conv2d<T>(name + ".conv_first", in_channels, cfg.feat);
  for (int b = 0; b < cfg.blocks; ++b)
    trunk_.emplace_back(name + ".rrdb" + std::to_string(b + 1), cfg);
  conv_trunk_ = Conv2d<T>(name + ".conv_trunk", cfg.feat, cfg.feat);
  conv_up_ = Conv2d<T>(name + ".conv_up", cfg.feat, 4 * cfg.feat);
  conv_last_ = Conv2d<T>(name + ".conv_last", cfg.feat, out_channels);
}

template <class T>
void UpscaleNet<T>::init(RngStream& rng) {
  conv_first_.init(rng, 1.0);
  for (auto& b : trunk_) b.init(rng);
  conv_trunk_.init(rng, 1.0);
  conv_up_.init(rng, 1.0);
  conv_last_.init(rng, kResidualInitScale);
}

template <class T>
Tensor4<T> UpscaleNet<T>::forward(const Tensor4<T>& x, bool keep_cache) {
  if (x.c() != in_ch_)
    throw DimensionError("network expects " + std::to_string(in_ch_) + " input channels, got " +
                         x.shape_string());
  if (!keep_cache) clear_cache();
  Tensor4<T> fea(x.n(), cfg_.feat, x.h(), x.w());
  conv_first_.forward(x, 0, fea, 0);
  Tensor4<T> h = fea;
  for (auto& b : trunk_) h = b.forward(h, keep_cache);
  Tensor4<T> body = fea;
  {
    Tensor4<T> t(x.n(), cfg_.feat, x.h(), x.w());
    conv_trunk_.forward(h, 0, t, 0);
    add_scaled(body, t, T(1));
  }
  Tensor4<T> u(x.n(), 4 * cfg_.feat, x.h(), x.w());
  conv_up_.forward(body, 0, u, 0);
  Tensor4<T> up = depth_to_space(u, 2);
  leaky_relu(up, 0, up.c());
  Tensor4<T> y(x.n(), out_ch_, up.h(), up.w());
  conv_last_.forward(up, 0, y, 0);
  if (keep_cache) {
    cache_.valid = true;
    cache_.x = x;
    cache_.fea = std::move(fea);
    cache_.trunk_in = std::move(h);
    cache_.body = std::move(body);
    cache_.up = std::move(up);
  }
  return y;
}

template <class T>
Tensor4<T> UpscaleNet<T>::backward(const Tensor4<T>& dy, bool need_input_grad) {
  if (!cache_.valid) throw NumericError("network backward: missing cache");
  const Cache& c = cache_;
  if (dy.n() != c.up.n() || dy.c() != out_ch_ || dy.h() != c.up.h() || dy.w() != c.up.w())
    throw DimensionError("network backward grad " + dy.shape_string());
  Tensor4<T> dup(c.up.n(), c.up.c(), c.up.h(), c.up.w());
  conv_last_.backward(c.up, 0, dy, 0, &dup, 0);
  leaky_relu_backward(c.up, 0, dup, 0, dup.c());
  const Tensor4<T> du = space_to_depth(dup, 2);
  Tensor4<T> dbody(c.body.n(), c.body.c(), c.body.h(), c.body.w());
  conv_up_.backward(c.body, 0, du, 0, &dbody, 0);
  Tensor4<T> g(dbody.n(), dbody.c(), dbody.h(), dbody.w());
  conv_trunk_.backward(c.trunk_in, 0, dbody, 0, &g, 0);
  for (auto it = trunk_.rbegin(); it != trunk_.rend(); ++it) g = it->backward(g);
  add_scaled(g, dbody, T(1));
  Tensor4<T> dx;
  if (need_input_grad) {
    dx = Tensor4<T>(c.x.n(), c.x.c(), c.x.h(), c.x.w());
    conv_first_.backward(c.x, 0, g, 0, &dx, 0);
  } else {
    conv_first_.backward(c.x, 0, g, 0, nullptr, 0);
  }
  return dx;
}

template <class T>
void UpscaleNet<T>::collect(std::vector<Parameter<T>*>& out) {
  out.push_back(&conv_first_.weight());
  out.push_back(&conv_first_.bias());
  for (auto& b : trunk_) b.collect(out);
  for (Conv2d<T>* conv : {&conv_trunk_, &conv_up_, &conv_last_}) {
    out.push_back(&conv->weight());
    out.push_back(&conv->bias());
  }
}

template <class T>
void UpscaleNet<T>::clear_cache() {
  cache_ = Cache();
  for (auto& b : trunk_) b.clear_cache();
}

// ------------------------------------------------------------------ JointNet

template <class T>
JointNet<T>::JointNet(const NetConfig& cfg) : cfg_(cfg), f_("f", 5, 4, cfg), c_("c", 4, 3, cfg) {}

template <class T>
void JointNet<T>::init(std::uint64_t seed) {
  RngStream rng_f(seed, 1);
  RngStream rng_c(seed, 2);
  f_.init(rng_f);
  c_.init(rng_c);
}

template <class T>
Tensor4<T> JointNet<T>::forward_f(const Tensor4<T>& packed_lr, const Tensor4<T>& noise_map,
                                  bool keep_cache) {
  if (packed_lr.c() != 4) throw DimensionError("forward_f: packed input " + packed_lr.shape_string());
  if (noise_map.c() != 1 || noise_map.n() != packed_lr.n() || noise_map.h() != packed_lr.h() ||
      noise_map.w() != packed_lr.w())
    throw DimensionError("forward_f: noise map " + noise_map.shape_string() + " vs input " +
                         packed_lr.shape_string());
  Tensor4<T> x(packed_lr.n(), 5, packed_lr.h(), packed_lr.w());
  copy_channels(packed_lr, 0, x, 0, 4);
  copy_channels(noise_map, 0, x, 4, 1);
  return f_.forward(x, keep_cache);
}

template <class T>
Tensor4<T> JointNet<T>::forward_c(const Tensor4<T>& packed_sr, bool keep_cache) {
  if (packed_sr.c() != 4) throw DimensionError("forward_c: input " + packed_sr.shape_string());
  return c_.forward(packed_sr, keep_cache);
}

template <class T>
std::vector<Parameter<T>*> JointNet<T>::parameters() {
  std::vector<Parameter<T>*> out;
  f_.collect(out);
  c_.collect(out);
  return out;
}

template <class T>
void JointNet<T>::zero_grad() {
  for (auto* p : parameters()) p->zero_grad();
}

template <class T>
void JointNet<T>::clear_cache() {
  f_.clear_cache();
  c_.clear_cache();
}

template class DenseBlock<float>;
template class DenseBlock<double>;
template class ResidualInResidual<float>;
template class ResidualInResidual<double>;
template class UpscaleNet<float>;
template class UpscaleNet<double>;
template class JointNet<float>;
template class JointNet<double>;

}  // namespace rawpipe::tinynet
