// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "rawpipe/tinynet/train.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "rawpipe/bayer.hpp"
#include "rawpipe/random.hpp"

namespace rawpipe::tinynet {
namespace {

template <class T>
void require_same(const Tensor4<T>& a, const Tensor4<T>& b, const char* what) {
  if (!a.same_shape(b))
    throw DimensionError(std::string(what) + ": shape " + a.shape_string() + " vs " +
                         b.shape_string());
  if (!a.all_finite() || !b.all_finite())
    throw NumericError(std::string(what) + ": non-finite input");
}

// Mean squared error; writes scale * d(mse)/d(pred) into grad.
template <class T>
double mse_and_grad(const Tensor4<T>& pred, const Tensor4<T>& gt, double scale, Tensor4<T>& grad) {
  const std::size_t n = pred.size();
  grad = Tensor4<T>(pred.n(), pred.c(), pred.h(), pred.w());
  if (n == 0) return 0.0;
  double acc = 0.0;
  const double g = 2.0 * scale / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(pred.data()[i]) - static_cast<double>(gt.data()[i]);
    acc += d * d;
    grad.data()[i] = static_cast<T>(g * d);
  }
  return acc / static_cast<double>(n);
}

ColorImage crop(const ColorImage& img, int y0, int x0, int size) {
  ColorImage out(size, size);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) out.at(c, y, x) = img.at(c, y0 + y, x0 + x);
  return out;
}

BayerMosaic crop_mosaic(const BayerMosaic& m, int y0, int x0, int h, int w) {
  BayerMosaic out(h, w, m.pattern());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out(y, x) = m(y0 + y, x0 + x);
  return out;
}

Tensor4<float> run_full(const BayerMosaic& m, double sigma255, JointNet<float>& net) {
  const Tensor4<float> packed = to_tensor<float>(pack(m));
  const Tensor4<float> noise(1, 1, packed.h(), packed.w(), static_cast<float>(sigma255 / 255.0));
  const Tensor4<float> sr = net.forward_f(packed, noise);
  return net.forward_c(sr);
}

}  // namespace

template <class T>
LossResult<T> loss_total(const Tensor4<T>& pred_color, const Tensor4<T>& gt_color,
                         const Tensor4<T>& pred_packed_hr, const Tensor4<T>& gt_packed_hr,
                         double lambda) {
  require_same(pred_color, gt_color, "loss_total color");
  require_same(pred_packed_hr, gt_packed_hr, "loss_total packed");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be >= 0");
  LossResult<T> r;
  r.joint = mse_and_grad(pred_color, gt_color, 1.0, r.grad_color);
  r.sr = mse_and_grad(pred_packed_hr, gt_packed_hr, lambda, r.grad_packed);
  r.total = r.joint + lambda * r.sr;
  return r;
}

template <class T>
void adam_step(const std::vector<Parameter<T>*>& params, AdamState<T>& state,
               const AdamConfig& cfg) {
  for (const auto* p : params) {
    if (p->grad.size() != p->value.size()) throw DimensionError("adam: " + p->name + " grad size");
    for (T g : p->grad)
      if (!std::isfinite(g)) throw NumericError("adam: non-finite gradient in " + p->name);
  }
  if (state.m.empty()) {
    for (const auto* p : params) {
      state.m.emplace_back(p->size(), T(0));
      state.v.emplace_back(p->size(), T(0));
    }
  }
  if (state.m.size() != params.size()) throw DimensionError("adam: state/parameter count mismatch");
  ++state.step;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  const T b1 = static_cast<T>(cfg.beta1);
  const T b2 = static_cast<T>(cfg.beta2);
  const T step = static_cast<T>(cfg.lr / bc1);
  const T inv_sqrt_bc2 = static_cast<T>(1.0 / std::sqrt(bc2));
  const T eps = static_cast<T>(cfg.eps);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = *params[i];
    auto& m = state.m[i];
    auto& v = state.v[i];
    if (m.size() != p.size()) throw DimensionError("adam: state shape for " + p.name);
    for (std::size_t j = 0; j < p.size(); ++j) {
      const T g = p.grad[j];
      m[j] = b1 * m[j] + (T(1) - b1) * g;
      v[j] = b2 * v[j] + (T(1) - b2) * g * g;
      p.value[j] -= step * m[j] / (std::sqrt(v[j]) * inv_sqrt_bc2 + eps);
    }
  }
}

void TrainConfig::validate(int scale) const {
  if (!(adam.lr > 0.0) || batch <= 0 || hr_patch <= 0 || steps <= 0)
    throw ParameterError("lr, batch, hr_patch and steps must be positive");
  if (!(adam.beta1 > 0.0 && adam.beta1 < 1.0) || !(adam.beta2 > 0.0 && adam.beta2 < 1.0) ||
      !(adam.eps > 0.0))
    throw ParameterError("Adam betas must be in (0, 1) and eps positive");
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be >= 0");
  if (scale != 2) throw ParameterError("the joint network upsamples by exactly 2");
  if (hr_patch % (4 * scale) != 0)
    throw ParameterError("hr_patch must be a multiple of " + std::to_string(4 * scale));
  net.validate();
}

std::string loss_curve_csv(const std::vector<LossRecord>& curve) {
  std::ostringstream os;
  os << "step,L,L_joint,L_SR\n" << std::setprecision(9);
  for (const auto& r : curve) os << r.step << ',' << r.total << ',' << r.joint << ',' << r.sr << '\n';
  return os.str();
}

double window_mean(const std::vector<LossRecord>& curve, std::size_t begin, std::size_t end) {
  end = std::min(end, curve.size());
  if (begin >= end) throw ParameterError("window_mean: empty window");
  double acc = 0.0;
  for (std::size_t i = begin; i < end; ++i) acc += curve[i].total;
  return acc / static_cast<double>(end - begin);
}

TrainResult train(const std::vector<ColorImage>& dataset, const TrainConfig& cfg,
                  const DegradationSpec& spec, const StepCallback& on_step) {
  cfg.validate(spec.scale);
  if (dataset.empty()) throw ParameterError("train: empty dataset");
  for (const auto& img : dataset)
    if (img.height() < cfg.hr_patch || img.width() < cfg.hr_patch)
      throw DimensionError("train: image " + std::to_string(img.height()) + "x" +
                           std::to_string(img.width()) + " smaller than hr_patch " +
                           std::to_string(cfg.hr_patch));

  TrainResult result{JointNet<float>(cfg.net), {}};
  JointNet<float>& net = result.net;
  net.init(cfg.seed);
  const auto params = net.parameters();
  AdamState<float> adam;
  RngStream crops(cfg.seed, 3);
  const CounterRng noise_seeds(cfg.seed, 4);

  for (int step = 0; step < cfg.steps; ++step) {
    std::vector<DegradedPair> pairs;
    std::vector<PackedMosaic> packed;
    for (int b = 0; b < cfg.batch; ++b) {
      const ColorImage& img = dataset[crops.below(dataset.size())];
      const int y0 = 2 * static_cast<int>(crops.below((img.height() - cfg.hr_patch) / 2 + 1));
      const int x0 = 2 * static_cast<int>(crops.below((img.width() - cfg.hr_patch) / 2 + 1));
      DegradationSpec s = spec;
      s.seed = noise_seeds.bits(static_cast<std::uint64_t>(step) * cfg.batch + b);
      pairs.push_back(degrade(crop(img, y0, x0, cfg.hr_patch), s));
      packed.push_back(pack(pairs.back().lr_mosaic_noisy));
    }
    std::vector<const PlanarImage*> in, noise, gt_c, gt_p;
    for (int b = 0; b < cfg.batch; ++b) {
      in.push_back(&packed[b]);
      noise.push_back(&pairs[b].noise_map);
      gt_c.push_back(&pairs[b].gt_hr_color);
      gt_p.push_back(&pairs[b].gt_hr_packed);
    }

    net.zero_grad();
    const Tensor4<float> sr = net.forward_f(to_tensor<float>(in), to_tensor<float>(noise), true);
    const Tensor4<float> color = net.forward_c(sr, true);
    LossResult<float> loss;
    try {
      loss = loss_total(color, to_tensor<float>(gt_c), sr, to_tensor<float>(gt_p), cfg.lambda);
    } catch (const NumericError& e) {
      throw NumericError("training aborted at step " + std::to_string(step) + ": " + e.what());
    }
    Tensor4<float> dsr = net.net_c().backward(loss.grad_color, true);
    for (std::size_t i = 0; i < dsr.size(); ++i) dsr.data()[i] += loss.grad_packed.data()[i];
    net.net_f().backward(dsr, false);
    net.clear_cache();
    try {
      adam_step(params, adam, cfg.adam);
    } catch (const NumericError& e) {
      throw NumericError("training aborted at step " + std::to_string(step) + ": " + e.what());
    }
    const LossRecord rec{step, loss.total, loss.joint, loss.sr};
    if (!std::isfinite(rec.total))
      throw NumericError("training aborted at step " + std::to_string(step) + ": loss is NaN");
    result.curve.push_back(rec);
    if (on_step) on_step(rec);
  }
  return result;
}

int tile_margin(const NetConfig& cfg, const TileOptions& tiles) {
  if (tiles.overlap < 0) throw ParameterError("tile overlap must be >= 0");
  int m = tiles.overlap + (tiles.overlap & 1);
  if (tiles.exact) m = std::max(m, receptive_radius(cfg));
  return m;
}

ColorImage infer(const BayerMosaic& noisy_lr, double sigma255, JointNet<float>& net,
                 const TileOptions& tiles) {
  if (!(sigma255 >= 0.0) || !std::isfinite(sigma255)) throw ParameterError("sigma must be >= 0");
  if (tiles.tile < 0) throw ParameterError("tile size must be >= 0");
  const int h = noisy_lr.height();
  const int w = noisy_lr.width();
  if (h < 2 || w < 2) throw DimensionError("infer: mosaic too small");
  ColorImage out(2 * h, 2 * w);
  if (tiles.tile == 0 || (tiles.tile >= h && tiles.tile >= w)) {
    out = to_color(run_full(noisy_lr, sigma255, net));
  } else {
    const int t = std::max(2, tiles.tile - (tiles.tile & 1));
    const int m = tile_margin(net.config(), tiles);
    for (int y0 = 0; y0 < h; y0 += t) {
      for (int x0 = 0; x0 < w; x0 += t) {
        const int y1 = std::min(h, y0 + t);
        const int x1 = std::min(w, x0 + t);
        const int cy0 = std::max(0, y0 - m);
        const int cx0 = std::max(0, x0 - m);
        const int cy1 = std::min(h, y1 + m);
        const int cx1 = std::min(w, x1 + m);
        const Tensor4<float> part =
            run_full(crop_mosaic(noisy_lr, cy0, cx0, cy1 - cy0, cx1 - cx0), sigma255, net);
        for (int c = 0; c < 3; ++c)
          for (int y = 2 * y0; y < 2 * y1; ++y)
            for (int x = 2 * x0; x < 2 * x1; ++x)
              out.at(c, y, x) = part.at(0, c, y - 2 * cy0, x - 2 * cx0);
      }
    }
  }
  out.clamp01();
  return out;
}

template <class T>
Tensor4<T> to_tensor(const PlanarImage& img) {
  Tensor4<T> t(1, img.channels(), img.height(), img.width());
  const auto v = img.values();
  for (std::size_t i = 0; i < v.size(); ++i) t.data()[i] = static_cast<T>(v[i]);
  return t;
}

template <class T>
Tensor4<T> to_tensor(const std::vector<const PlanarImage*>& imgs) {
  if (imgs.empty()) throw DimensionError("to_tensor: empty batch");
  const PlanarImage& first = *imgs.front();
  Tensor4<T> t(static_cast<int>(imgs.size()), first.channels(), first.height(), first.width());
  for (std::size_t n = 0; n < imgs.size(); ++n) {
    if (!imgs[n]->same_shape(first)) throw DimensionError("to_tensor: batch shapes differ");
    const auto v = imgs[n]->values();
    T* dst = t.ptr(static_cast<int>(n));
    for (std::size_t i = 0; i < v.size(); ++i) dst[i] = static_cast<T>(v[i]);
  }
  return t;
}

template <class T>
ColorImage to_color(const Tensor4<T>& t, int n) {
  if (t.c() != 3 || n < 0 || n >= t.n()) throw DimensionError("to_color: " + t.shape_string());
  ColorImage out(t.h(), t.w());
  const T* src = t.ptr(n);
  auto v = out.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(src[i]);
  return out;
}

#define RAWPIPE_INSTANTIATE_TRAIN(T)                                                          \
  template LossResult<T> loss_total<T>(const Tensor4<T>&, const Tensor4<T>&,                 \
                                       const Tensor4<T>&, const Tensor4<T>&, double);        \
  template void adam_step<T>(const std::vector<Parameter<T>*>&, AdamState<T>&,               \
                             const AdamConfig&);                                             \
  template Tensor4<T> to_tensor<T>(const PlanarImage&);                                      \
  template Tensor4<T> to_tensor<T>(const std::vector<const PlanarImage*>&);                  \
  template ColorImage to_color<T>(const Tensor4<T>&, int);

RAWPIPE_INSTANTIATE_TRAIN(float)
RAWPIPE_INSTANTIATE_TRAIN(double)

}  // namespace rawpipe::tinynet
