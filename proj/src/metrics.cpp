// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "rawpipe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <iomanip>

#include "rawpipe/simd/kernels.hpp"

namespace rawpipe {

double psnr(const PlanarImage& a, const PlanarImage& b) {
  if (!a.same_shape(b)) throw DimensionError("psnr: image shapes differ");
  if (a.size() == 0) throw DimensionError("psnr: empty image");
  const double sse = simd::sum_squared_diff(a.values().data(), b.values().data(), a.size());
  const double mse = sse / static_cast<double>(a.size());
  if (mse == 0.0) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / mse));
}

namespace {

// Valid-mode separable filtering of a double plane.
std::vector<double> filter_valid(const std::vector<double>& src, int h, int w,
                                 const std::vector<double>& taps) {
  const auto& k = simd::kernels<double>();
  const int n = static_cast<int>(taps.size());
  const int oh = h - n + 1;
  const int ow = w - n + 1;
  std::vector<double> mid(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y)
    k.fir(src.data() + static_cast<std::size_t>(y) * w, ow, taps.data(), n,
          mid.data() + static_cast<std::size_t>(y) * ow);
  std::vector<double> out(static_cast<std::size_t>(oh) * ow, 0.0);
  for (int y = 0; y < oh; ++y)
    for (int t = 0; t < n; ++t)
      k.axpy(ow, taps[t], mid.data() + static_cast<std::size_t>(y + t) * ow,
             out.data() + static_cast<std::size_t>(y) * ow);
  return out;
}

}  // namespace

double ssim(const PlanarImage& a, const PlanarImage& b, const SsimOptions& opt) {
  if (!a.same_shape(b)) throw DimensionError("ssim: image shapes differ");
  if (opt.window < 1 || opt.window % 2 == 0) throw ParameterError("ssim: window must be odd");
  if (a.height() < opt.window || a.width() < opt.window)
    throw DimensionError("ssim: image smaller than the " + std::to_string(opt.window) +
                         "x" + std::to_string(opt.window) + " window");
  const int r = opt.window / 2;
  std::vector<double> taps(opt.window);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    taps[i + r] = std::exp(-(static_cast<double>(i) * i) / (2.0 * opt.sigma * opt.sigma));
    sum += taps[i + r];
  }
  for (auto& t : taps) t /= sum;

  const double c1 = (opt.k1 * opt.dynamic_range) * (opt.k1 * opt.dynamic_range);
  const double c2 = (opt.k2 * opt.dynamic_range) * (opt.k2 * opt.dynamic_range);
  const int h = a.height();
  const int w = a.width();
  const std::size_t n = a.plane_size();

  double total = 0.0;
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (int c = 0; c < a.channels(); ++c) {
    const auto pa = a.plane(c);
    const auto pb = b.plane(c);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = pa[i];
      y[i] = pb[i];
      xx[i] = x[i] * x[i];
      yy[i] = y[i] * y[i];
      xy[i] = x[i] * y[i];
    }
    const auto mx = filter_valid(x, h, w, taps);
    const auto my = filter_valid(y, h, w, taps);
    const auto mxx = filter_valid(xx, h, w, taps);
    const auto myy = filter_valid(yy, h, w, taps);
    const auto mxy = filter_valid(xy, h, w, taps);
    double acc = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
      const double vx = mxx[i] - mx[i] * mx[i];
      const double vy = myy[i] - my[i] * my[i];
      const double cov = mxy[i] - mx[i] * my[i];
      const double num = (2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2);
      const double den = (mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2);
      acc += num / den;
    }
    total += acc / static_cast<double>(mx.size());
  }
  return total / a.channels();
}

void MetricsReport::finalize() {
  mean_psnr_db = 0.0;
  mean_ssim = 0.0;
  if (images.empty()) return;
  for (const auto& s : images) {
    mean_psnr_db += s.psnr_db;
    mean_ssim += s.ssim;
  }
  mean_psnr_db /= static_cast<double>(images.size());
  mean_ssim /= static_cast<double>(images.size());
}

std::string MetricsReport::to_csv() const {
  std::ostringstream os;
  os << std::fixed;
  os << "name,psnr_db,ssim\n";
  for (const auto& s : images)
    os << s.name << ',' << std::setprecision(4) << s.psnr_db << ',' << std::setprecision(6)
       << s.ssim << '\n';
  os << "mean," << std::setprecision(4) << mean_psnr_db << ',' << std::setprecision(6) << mean_ssim
     << '\n';
  return os.str();
}

}  // namespace rawpipe
