// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "rawpipe/classical.hpp"

#include <algorithm>
#include <cmath>

#include "rawpipe/simd/kernels.hpp"

namespace rawpipe {

std::string to_string(DemosaicMethod m) {
  return m == DemosaicMethod::Bilinear ? "bilinear" : "malvar";
}

DemosaicMethod parse_demosaic_method(const std::string& s) {
  if (s == "bilinear") return DemosaicMethod::Bilinear;
  if (s == "malvar") return DemosaicMethod::Malvar;
  throw ParameterError("unknown demosaic method '" + s + "' (expected bilinear or malvar)");
}

namespace {

// Reflect-padded accessor over a mosaic plane.
struct Sampler {
  const BayerMosaic& m;
  float operator()(int y, int x) const {
    return m(reflect101(y, m.height()), reflect101(x, m.width()));
  }
};

}  // namespace

ColorImage demosaic_bilinear(const BayerMosaic& m) {
  const int h = m.height();
  const int w = m.width();
  const CfaPattern pat = m.pattern();
  const Sampler s{m};
  ColorImage out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int native = cfa_channel(pat, y, x);
      for (int c = 0; c < 3; ++c) {
        if (c == native) {
          out.at(c, y, x) = m(y, x);
          continue;
        }
        // Same-channel sites inside the 3x3 neighbourhood: 2 or 4 of them.
        float acc = 0.0f;
        int n = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if ((dy == 0 && dx == 0) || cfa_channel(pat, y + dy, x + dx) != c) continue;
            acc += s(y + dy, x + dx);
            ++n;
          }
        }
        out.at(c, y, x) = acc / static_cast<float>(n);
      }
    }
  }
  return out;
}

ColorImage demosaic_malvar(const BayerMosaic& m) {
  const int h = m.height();
  const int w = m.width();
  const CfaPattern pat = m.pattern();
  const Sampler s{m};
  ColorImage out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float c0 = m(y, x);
      const float n1 = s(y - 1, x), s1 = s(y + 1, x), w1 = s(y, x - 1), e1 = s(y, x + 1);
      const float n2 = s(y - 2, x), s2 = s(y + 2, x), w2 = s(y, x - 2), e2 = s(y, x + 2);
      const float diag = s(y - 1, x - 1) + s(y - 1, x + 1) + s(y + 1, x - 1) + s(y + 1, x + 1);
      const float axis1 = n1 + s1 + w1 + e1;
      const float axis2 = n2 + s2 + w2 + e2;

      const int native = cfa_channel(pat, y, x);
      float rgb[3];
      rgb[native] = c0;
      if (native != 1) {
        // R or B site: green from the cross, the opposite color from diagonals.
        const int other = 2 - native;
        rgb[1] = (4.0f * c0 + 2.0f * axis1 - axis2) * 0.125f;
        rgb[other] = (6.0f * c0 + 2.0f * diag - 1.5f * axis2) * 0.125f;
      } else {
        const float horiz =
            (5.0f * c0 + 4.0f * (w1 + e1) - diag - (w2 + e2) + 0.5f * (n2 + s2)) * 0.125f;
        const float vert =
            (5.0f * c0 + 4.0f * (n1 + s1) - diag - (n2 + s2) + 0.5f * (w2 + e2)) * 0.125f;
        const int row_color = cfa_channel(pat, y, x + 1);  // color to the left/right
        rgb[row_color] = horiz;
        rgb[2 - row_color] = vert;
      }
      for (int c = 0; c < 3; ++c) out.at(c, y, x) = std::clamp(rgb[c], 0.0f, 1.0f);
    }
  }
  return out;
}

ColorImage demosaic(const BayerMosaic& m, DemosaicMethod method) {
  return method == DemosaicMethod::Bilinear ? demosaic_bilinear(m) : demosaic_malvar(m);
}

std::vector<float> gaussian_taps(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw ParameterError("gaussian sigma must be finite and >= 0");
  if (sigma == 0.0) return {1.0f};
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> wd(2 * r + 1);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    wd[i + r] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    sum += wd[i + r];
  }
  std::vector<float> taps(wd.size());
  for (std::size_t i = 0; i < wd.size(); ++i) taps[i] = static_cast<float>(wd[i] / sum);
  return taps;
}

PlanarImage gaussian_blur(const PlanarImage& img, double sigma) {
  const std::vector<float> taps = gaussian_taps(sigma);
  if (taps.size() == 1) return img;
  const auto& k = simd::kernels<float>();
  const int r = static_cast<int>(taps.size() / 2);
  const int h = img.height();
  const int w = img.width();
  const int ntaps = static_cast<int>(taps.size());

  PlanarImage tmp(img.channels(), h, w);
  PlanarImage out(img.channels(), h, w);
  std::vector<float> padded(static_cast<std::size_t>(w + 2 * r));
  for (int c = 0; c < img.channels(); ++c) {
    const auto src = img.plane(c);
    auto mid = tmp.plane(c);
    for (int y = 0; y < h; ++y) {
      const float* row = src.data() + static_cast<std::size_t>(y) * w;
      for (int i = 0; i < w + 2 * r; ++i) padded[i] = row[reflect101(i - r, w)];
      k.fir(padded.data(), w, taps.data(), ntaps, mid.data() + static_cast<std::size_t>(y) * w);
    }
    auto dst = out.plane(c);
    for (int y = 0; y < h; ++y) {
      float* orow = dst.data() + static_cast<std::size_t>(y) * w;
      for (int t = 0; t < ntaps; ++t) {
        const int sy = reflect101(y + t - r, h);
        k.axpy(w, taps[t], mid.data() + static_cast<std::size_t>(sy) * w, orow);
      }
    }
  }
  return out;
}

ColorImage denoise_gaussian(const ColorImage& img, double sigma) {
  return ColorImage(gaussian_blur(img, sigma));
}

PackedMosaic denoise_gaussian(const PackedMosaic& p, double sigma) {
  return PackedMosaic(gaussian_blur(p, sigma), p.pattern());
}

double cubic_weight(double x) noexcept {
  constexpr double a = -0.5;
  x = std::abs(x);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

namespace {

struct AxisTaps {
  std::vector<int> index;     // 4 per output sample
  std::vector<double> weight; // 4 per output sample
};

AxisTaps axis_taps(int n_in, int factor, double offset) {
  const int n_out = n_in * factor;
  AxisTaps t;
  t.index.resize(static_cast<std::size_t>(n_out) * 4);
  t.weight.resize(static_cast<std::size_t>(n_out) * 4);
  for (int o = 0; o < n_out; ++o) {
    const double src = (o + 0.5) / factor - 0.5 + offset;
    const double base = std::floor(src);
    const double frac = src - base;
    const int i0 = static_cast<int>(base);
    for (int k = 0; k < 4; ++k) {
      t.index[o * 4 + k] = reflect101(i0 - 1 + k, n_in);
      t.weight[o * 4 + k] = cubic_weight(frac - (k - 1));
    }
  }
  return t;
}

}  // namespace

PlanarImage resize_bicubic(const PlanarImage& img, int factor,
                           const std::vector<double>& row_offset,
                           const std::vector<double>& col_offset) {
  if (factor < 1) throw ParameterError("bicubic factor must be >= 1");
  if (factor == 1) return img;
  const int h = img.height();
  const int w = img.width();
  const int oh = h * factor;
  const int ow = w * factor;
  PlanarImage out(img.channels(), oh, ow);
  std::vector<double> mid(static_cast<std::size_t>(h) * ow);
  for (int c = 0; c < img.channels(); ++c) {
    const double ro = row_offset.empty() ? 0.0 : row_offset.at(c);
    const double co = col_offset.empty() ? 0.0 : col_offset.at(c);
    const AxisTaps tx = axis_taps(w, factor, co);
    const AxisTaps ty = axis_taps(h, factor, ro);
    const auto src = img.plane(c);
    for (int y = 0; y < h; ++y) {
      const float* row = src.data() + static_cast<std::size_t>(y) * w;
      for (int x = 0; x < ow; ++x) {
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) acc += tx.weight[x * 4 + k] * row[tx.index[x * 4 + k]];
        mid[static_cast<std::size_t>(y) * ow + x] = acc;
      }
    }
    auto dst = out.plane(c);
    for (int y = 0; y < oh; ++y) {
      float* orow = dst.data() + static_cast<std::size_t>(y) * ow;
      const double* r0 = mid.data() + static_cast<std::size_t>(ty.index[y * 4 + 0]) * ow;
      const double* r1 = mid.data() + static_cast<std::size_t>(ty.index[y * 4 + 1]) * ow;
      const double* r2 = mid.data() + static_cast<std::size_t>(ty.index[y * 4 + 2]) * ow;
      const double* r3 = mid.data() + static_cast<std::size_t>(ty.index[y * 4 + 3]) * ow;
      const double w0 = ty.weight[y * 4 + 0], w1 = ty.weight[y * 4 + 1];
      const double w2 = ty.weight[y * 4 + 2], w3 = ty.weight[y * 4 + 3];
      for (int x = 0; x < ow; ++x)
        orow[x] = static_cast<float>(w0 * r0[x] + w1 * r1[x] + w2 * r2[x] + w3 * r3[x]);
    }
  }
  return out;
}

ColorImage sr_bicubic(const ColorImage& img, int factor) {
  ColorImage out(resize_bicubic(img, factor));
  out.clamp01();
  return out;
}

double packed_phase_offset(int phase, int factor) noexcept {
  return (1.0 - 1.0 / factor) * (0.25 - 0.5 * phase);
}

PackedMosaic sr_bicubic(const PackedMosaic& p, int factor) {
  // Phase-plane parities (row, col): R (0,0), G1 (0,1), G2 (1,0), B (1,1).
  const std::vector<double> row_offset = {packed_phase_offset(0, factor),
                                          packed_phase_offset(0, factor),
                                          packed_phase_offset(1, factor),
                                          packed_phase_offset(1, factor)};
  const std::vector<double> col_offset = {packed_phase_offset(0, factor),
                                          packed_phase_offset(1, factor),
                                          packed_phase_offset(0, factor),
                                          packed_phase_offset(1, factor)};
  PackedMosaic out(resize_bicubic(p, factor, row_offset, col_offset), p.pattern());
  out.clamp01();
  return out;
}

}  // namespace rawpipe
