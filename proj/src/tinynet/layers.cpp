// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "rawpipe/tinynet/layers.hpp"

#include <cmath>

#include "rawpipe/simd/kernels.hpp"

namespace rawpipe::tinynet {
namespace {

// Rows [r0, r1) of the im2col matrix:
// col[(ci*9 + ky*3 + kx) * L + (y - r0)*W + x] = in[ci][y + ky - 1][x + kx - 1],
// zero outside, with L = (r1 - r0) * W.
template <class T>
void im2col(const T* in, int cin, int h, int w, int r0, int r1, T* col) {
  const std::size_t hw = static_cast<std::size_t>(h) * w;
  const std::size_t len = static_cast<std::size_t>(r1 - r0) * w;
  for (int ci = 0; ci < cin; ++ci) {
    const T* src = in + ci * hw;
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        T* dst = col + (static_cast<std::size_t>(ci) * 9 + ky * 3 + kx) * len;
        const int dx = kx - 1;
        const int x0 = std::max(0, -dx);
        const int x1 = std::min(w, w - dx);
        for (int y = r0; y < r1; ++y) {
          T* drow = dst + static_cast<std::size_t>(y - r0) * w;
          const int sy = y + ky - 1;
          if (sy < 0 || sy >= h) {
            std::fill(drow, drow + w, T(0));
            continue;
          }
          const T* srow = src + static_cast<std::size_t>(sy) * w;
          for (int x = 0; x < x0; ++x) drow[x] = T(0);
          for (int x = x0; x < x1; ++x) drow[x] = srow[x + dx];
          for (int x = x1; x < w; ++x) drow[x] = T(0);
        }
      }
    }
  }
}

// Adjoint of im2col over the same row range: adds each column entry back
// into the input pixel it was read from.
template <class T>
void col2im_add(const T* col, int cin, int h, int w, int r0, int r1, T* din) {
  const std::size_t hw = static_cast<std::size_t>(h) * w;
  const std::size_t len = static_cast<std::size_t>(r1 - r0) * w;
  for (int ci = 0; ci < cin; ++ci) {
    T* dst = din + ci * hw;
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        const T* src = col + (static_cast<std::size_t>(ci) * 9 + ky * 3 + kx) * len;
        const int dx = kx - 1;
        const int x0 = std::max(0, -dx);
        const int x1 = std::min(w, w - dx);
        for (int y = r0; y < r1; ++y) {
          const int sy = y + ky - 1;
          if (sy < 0 || sy >= h) continue;
          const T* srow = src + static_cast<std::size_t>(y - r0) * w;
          T* drow = dst + static_cast<std::size_t>(sy) * w;
          for (int x = x0; x < x1; ++x) drow[x + dx] += srow[x];
        }
      }
    }
  }
}

// Rows per im2col chunk, keeping the column buffer near 4M elements.
int chunk_rows(int k, int h, int w) {
  constexpr std::size_t kBudget = std::size_t{1} << 22;
  const std::size_t per_row = static_cast<std::size_t>(k) * w;
  return static_cast<int>(std::clamp<std::size_t>(kBudget / std::max<std::size_t>(per_row, 1), 1, h));
}

template <class T>
std::vector<T>& scratch(int slot) {
  thread_local std::vector<T> bufs[2];
  return bufs[slot];
}

void check_range(int c0, int count, int total, const char* what) {
  if (c0 < 0 || c0 + count > total)
    throw DimensionError(std::string(what) + ": channel range out of bounds");
}

}  // namespace

template <class T>
Conv2d<T>::Conv2d(std::string name, int cin, int cout) : cin_(cin), cout_(cout) {
  if (cin <= 0 || cout <= 0) throw DimensionError("conv channel counts must be positive");
  weight_.name = name + ".weight";
  weight_.dims = {cout, cin, 3, 3};
  weight_.value.assign(static_cast<std::size_t>(cout) * cin * 9, T(0));
  weight_.grad.assign(weight_.value.size(), T(0));
  bias_.name = name + ".bias";
  bias_.dims = {cout};
  bias_.value.assign(cout, T(0));
  bias_.grad.assign(cout, T(0));
}

template <class T>
void Conv2d<T>::init(RngStream& rng, double gain) {
  const double std = gain * std::sqrt(2.0 / (9.0 * cin_));
  for (auto& v : weight_.value) v = static_cast<T>(std * rng.normal());
  std::fill(bias_.value.begin(), bias_.value.end(), T(0));
}

template <class T>
void Conv2d<T>::forward(const Tensor4<T>& in, int in_c0, Tensor4<T>& out, int out_c0) const {
  check_range(in_c0, cin_, in.c(), "conv input");
  check_range(out_c0, cout_, out.c(), "conv output");
  if (in.n() != out.n() || in.h() != out.h() || in.w() != out.w())
    throw DimensionError("conv: spatial shape mismatch " + in.shape_string() + " vs " +
                         out.shape_string());
  const int h = in.h();
  const int w = in.w();
  const int hw = h * w;
  const int k = cin_ * 9;
  const int rows = chunk_rows(k, h, w);
  auto& col = scratch<T>(0);
  col.resize(static_cast<std::size_t>(k) * rows * w);
  const auto& kern = simd::kernels<T>();
  for (int n = 0; n < in.n(); ++n) {
    T* o = out.ptr(n, out_c0);
    for (int co = 0; co < cout_; ++co) std::fill(o + co * hw, o + (co + 1) * hw, bias_.value[co]);
    for (int r0 = 0; r0 < h; r0 += rows) {
      const int r1 = std::min(h, r0 + rows);
      const int len = (r1 - r0) * w;
      im2col(in.ptr(n, in_c0), cin_, h, w, r0, r1, col.data());
      kern.gemm(false, false, cout_, len, k, weight_.value.data(), k, col.data(), len,
                o + static_cast<std::size_t>(r0) * w, hw);
    }
  }
}

template <class T>
void Conv2d<T>::backward(const Tensor4<T>& in, int in_c0, const Tensor4<T>& dout, int dout_c0,
                         Tensor4<T>* din, int din_c0) {
  check_range(in_c0, cin_, in.c(), "conv backward input");
  check_range(dout_c0, cout_, dout.c(), "conv backward grad");
  if (din) check_range(din_c0, cin_, din->c(), "conv backward din");
  const int h = in.h();
  const int w = in.w();
  const int hw = h * w;
  const int k = cin_ * 9;
  const int rows = chunk_rows(k, h, w);
  auto& col = scratch<T>(0);
  auto& dcol = scratch<T>(1);
  col.resize(static_cast<std::size_t>(k) * rows * w);
  const auto& kern = simd::kernels<T>();
  for (int n = 0; n < in.n(); ++n) {
    const T* g = dout.ptr(n, dout_c0);
    for (int co = 0; co < cout_; ++co) {
      T acc = 0;
      for (int i = 0; i < hw; ++i) acc += g[static_cast<std::size_t>(co) * hw + i];
      bias_.grad[co] += acc;
    }
    for (int r0 = 0; r0 < h; r0 += rows) {
      const int r1 = std::min(h, r0 + rows);
      const int len = (r1 - r0) * w;
      const T* gc = g + static_cast<std::size_t>(r0) * w;
      im2col(in.ptr(n, in_c0), cin_, h, w, r0, r1, col.data());
      kern.gemm(false, true, cout_, k, len, gc, hw, col.data(), len, weight_.grad.data(), k);
      if (din) {
        dcol.assign(static_cast<std::size_t>(k) * len, T(0));
        kern.gemm(true, false, k, len, cout_, weight_.value.data(), k, gc, hw, dcol.data(), len);
        col2im_add(dcol.data(), cin_, h, w, r0, r1, din->ptr(n, din_c0));
      }
    }
  }
}

template <class T>
void leaky_relu(Tensor4<T>& x, int c0, int count) {
  check_range(c0, count, x.c(), "leaky_relu");
  const std::size_t len = static_cast<std::size_t>(count) * x.plane();
  const T slope = static_cast<T>(kLeakySlope);
  for (int n = 0; n < x.n(); ++n) {
    T* p = x.ptr(n, c0);
    for (std::size_t i = 0; i < len; ++i) p[i] = p[i] > T(0) ? p[i] : p[i] * slope;
  }
}

template <class T>
void leaky_relu_backward(const Tensor4<T>& post, int p0, Tensor4<T>& grad, int g0, int count) {
  check_range(p0, count, post.c(), "leaky_relu_backward");
  check_range(g0, count, grad.c(), "leaky_relu_backward");
  const std::size_t len = static_cast<std::size_t>(count) * post.plane();
  const T slope = static_cast<T>(kLeakySlope);
  for (int n = 0; n < post.n(); ++n) {
    const T* y = post.ptr(n, p0);
    T* g = grad.ptr(n, g0);
    for (std::size_t i = 0; i < len; ++i)
      if (!(y[i] > T(0))) g[i] *= slope;
  }
}

template <class T>
Tensor4<T> depth_to_space(const Tensor4<T>& in, int r) {
  if (r < 1 || in.c() % (r * r) != 0)
    throw DimensionError("depth_to_space: channels " + std::to_string(in.c()) +
                         " not divisible by r^2");
  const int c_out = in.c() / (r * r);
  Tensor4<T> out(in.n(), c_out, in.h() * r, in.w() * r);
  for (int n = 0; n < in.n(); ++n)
    for (int c = 0; c < c_out; ++c)
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
          for (int y = 0; y < in.h(); ++y)
            for (int x = 0; x < in.w(); ++x)
              out.at(n, c, y * r + i, x * r + j) = in.at(n, c * r * r + i * r + j, y, x);
  return out;
}

template <class T>
Tensor4<T> space_to_depth(const Tensor4<T>& in, int r) {
  if (r < 1 || in.h() % r != 0 || in.w() % r != 0)
    throw DimensionError("space_to_depth: spatial dims not divisible by r");
  const int h = in.h() / r;
  const int w = in.w() / r;
  Tensor4<T> out(in.n(), in.c() * r * r, h, w);
  for (int n = 0; n < in.n(); ++n)
    for (int c = 0; c < in.c(); ++c)
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
          for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
              out.at(n, c * r * r + i * r + j, y, x) = in.at(n, c, y * r + i, x * r + j);
  return out;
}

#define RAWPIPE_INSTANTIATE_LAYERS(T)                                                  \
  template class Conv2d<T>;                                                            \
  template void leaky_relu<T>(Tensor4<T>&, int, int);                                  \
  template void leaky_relu_backward<T>(const Tensor4<T>&, int, Tensor4<T>&, int, int); \
  template Tensor4<T> depth_to_space<T>(const Tensor4<T>&, int);                       \
  template Tensor4<T> space_to_depth<T>(const Tensor4<T>&, int);

RAWPIPE_INSTANTIATE_LAYERS(float)
RAWPIPE_INSTANTIATE_LAYERS(double)

}  // namespace rawpipe::tinynet
