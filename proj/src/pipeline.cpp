// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "rawpipe/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>
#include <variant>

#include "rawpipe/bayer.hpp"
#include "rawpipe/degrade.hpp"
#include "rawpipe/metrics.hpp"

namespace rawpipe {

std::string to_string(StageKind k) {
  switch (k) {
    case StageKind::Denoise: return "DN";
    case StageKind::SuperResolve: return "SR";
    case StageKind::Demosaic: return "DM";
  }
  return "?";
}

std::string to_string(Domain d) { return d == Domain::Mosaic ? "mosaic" : "color"; }

double denoise_sigma_for(double noise_sigma255, Domain domain, int scale, double gain) {
  const double density = domain == Domain::Mosaic ? 0.5 * scale : static_cast<double>(scale);
  return gain * (noise_sigma255 / 255.0) * density;
}

Stage Stage::denoise(double gain) {
  Stage s;
  s.kind = StageKind::Denoise;
  s.gain = gain;
  return s;
}

Stage Stage::denoise_fixed(double sigma_f) {
  Stage s;
  s.kind = StageKind::Denoise;
  s.gain = -1.0;
  s.sigma_f = sigma_f;
  return s;
}

Stage Stage::super_resolve(int factor) {
  Stage s;
  s.kind = StageKind::SuperResolve;
  s.factor = factor;
  return s;
}

Stage Stage::demosaic(DemosaicMethod method) {
  Stage s;
  s.kind = StageKind::Demosaic;
  s.method = method;
  return s;
}

std::string PipelineSpec::label() const {
  std::string out;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (i > 0) out += "->";
    out += to_string(stages[i].kind);
  }
  return out;
}

Validation validate(const PipelineSpec& spec) {
  if (spec.stages.empty()) return {ValidationCode::Empty, "pipeline has no stages"};
  if (spec.target_scale < 1)
    return {ValidationCode::InvalidParameter, "target_scale must be >= 1"};
  int counts[3] = {0, 0, 0};
  for (const Stage& s : spec.stages) {
    const int idx = static_cast<int>(s.kind);
    if (++counts[idx] > 1)
      return {ValidationCode::DuplicateStage, "duplicate " + to_string(s.kind) + " stage"};
  }
  if (counts[static_cast<int>(StageKind::Demosaic)] == 0)
    return {ValidationCode::MissingDemosaic, "missing DM stage: output would stay a mosaic"};

  SignalState state;
  for (const Stage& s : spec.stages) {
    switch (s.kind) {
      case StageKind::Denoise:
        if (s.gain < 0.0 && !(s.sigma_f >= 0.0))
          return {ValidationCode::InvalidParameter, "DN sigma_f must be >= 0"};
        break;
      case StageKind::SuperResolve:
        if (s.factor < 1) return {ValidationCode::InvalidParameter, "SR factor must be >= 1"};
        state.scale *= s.factor;
        break;
      case StageKind::Demosaic:
        if (state.domain != Domain::Mosaic)
          return {ValidationCode::DomainMismatch, "DM applied to a color image"};
        state.domain = Domain::Color;
        break;
    }
  }
  if (state.scale != spec.target_scale)
    return {ValidationCode::ScaleMismatch, "pipeline scale " + std::to_string(state.scale) +
                                               " != target " + std::to_string(spec.target_scale)};
  return {};
}

ColorImage run(const PipelineSpec& spec, const BayerMosaic& input, double noise_sigma255) {
  const Validation v = validate(spec);
  if (!v.ok()) throw ParameterError("invalid pipeline " + spec.label() + ": " + v.message);

  std::variant<PackedMosaic, ColorImage> signal = pack(input);
  int scale = 1;
  for (const Stage& s : spec.stages) {
    switch (s.kind) {
      case StageKind::Denoise: {
        const Domain d = std::holds_alternative<PackedMosaic>(signal) ? Domain::Mosaic
                                                                      : Domain::Color;
        const double sf =
            s.gain < 0.0 ? s.sigma_f : denoise_sigma_for(noise_sigma255, d, scale, s.gain);
        std::visit([&](auto& img) { img = denoise_gaussian(img, sf); }, signal);
        break;
      }
      case StageKind::SuperResolve:
        std::visit([&](auto& img) { img = sr_bicubic(img, s.factor); }, signal);
        scale *= s.factor;
        break;
      case StageKind::Demosaic:
        signal = demosaic(unpack(std::get<PackedMosaic>(signal)), s.method);
        break;
    }
  }
  ColorImage out = std::move(std::get<ColorImage>(signal));
  out.clamp01();
  return out;
}

std::vector<std::array<StageKind, 3>> all_orderings() {
  std::array<StageKind, 3> order = {StageKind::Denoise, StageKind::SuperResolve,
                                    StageKind::Demosaic};
  std::vector<std::array<StageKind, 3>> out;
  do {
    out.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

PipelineSpec AblationConfig::make_spec(const std::array<StageKind, 3>& order) const {
  PipelineSpec spec;
  spec.target_scale = scale;
  for (StageKind k : order) {
    switch (k) {
      case StageKind::Denoise: spec.stages.push_back(Stage::denoise(denoise_gain)); break;
      case StageKind::SuperResolve: spec.stages.push_back(Stage::super_resolve(scale)); break;
      case StageKind::Demosaic: spec.stages.push_back(Stage::demosaic(demosaic)); break;
    }
  }
  return spec;
}

const OrderingResult& OrderingReport::find(const std::string& ordering) const {
  for (const auto& r : rows)
    if (r.ordering == ordering) return r;
  throw ParameterError("ordering '" + ordering + "' not in report");
}

std::string OrderingReport::to_csv() const {
  std::ostringstream os;
  os << "ordering,mean_psnr_db,mean_ssim,n_images,sigma,scale\n";
  for (const auto& r : rows) {
    os << r.ordering << ',' << std::fixed << std::setprecision(4) << r.mean_psnr_db << ','
       << std::setprecision(6) << r.mean_ssim << ',' << n_images << ',' << std::setprecision(2)
       << sigma << ',' << scale << '\n';
  }
  return os.str();
}

OrderingReport ablate_orders(const std::vector<ColorImage>& dataset, const AblationConfig& cfg) {
  if (dataset.empty()) throw ParameterError("ablate_orders: empty dataset");
  const auto orders = all_orderings();
  const std::size_t n_img = dataset.size();

  std::vector<BayerMosaic> inputs(n_img);
  for (std::size_t i = 0; i < n_img; ++i) {
    DegradationSpec spec;
    spec.scale = cfg.scale;
    spec.sigma = cfg.sigma;
    spec.seed = image_seed(cfg.seed, i);
    inputs[i] = degrade(dataset[i], spec).lr_mosaic_noisy;
  }

  const std::size_t n_tasks = n_img * orders.size();
  std::vector<double> psnr_v(n_tasks), ssim_v(n_tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < n_tasks; t = next++) {
      const std::size_t o = t / n_img;
      const std::size_t i = t % n_img;
      const ColorImage out = run(cfg.make_spec(orders[o]), inputs[i], cfg.sigma);
      psnr_v[t] = psnr(out, dataset[i]);
      ssim_v[t] = ssim(out, dataset[i]);
    }
  };
  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  OrderingReport report;
  report.sigma = cfg.sigma;
  report.scale = cfg.scale;
  report.n_images = static_cast<int>(n_img);
  for (std::size_t o = 0; o < orders.size(); ++o) {
    OrderingResult r;
    r.ordering = cfg.make_spec(orders[o]).label();
    for (std::size_t i = 0; i < n_img; ++i) {
      r.psnr_db.push_back(psnr_v[o * n_img + i]);
      r.ssim.push_back(ssim_v[o * n_img + i]);
      r.mean_psnr_db += r.psnr_db.back();
      r.mean_ssim += r.ssim.back();
    }
    r.mean_psnr_db /= static_cast<double>(n_img);
    r.mean_ssim /= static_cast<double>(n_img);
    report.rows.push_back(std::move(r));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const auto& a, const auto& b) { return a.mean_psnr_db > b.mean_psnr_db; });
  report.joint_rows_requiring_weights = {"SR->DN+DM", "DN->DM+SR", "DM->DN+SR", "DM+DN->SR",
                                         "DM+SR->DN", "DN+SR->DM", "SR+DN+DM"};
  return report;
}

}  // namespace rawpipe
