// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any selected criterion fails.
//
//   acceptance                 run all nine
//   acceptance --criterion N   run only criterion N

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rawpipe/bayer.hpp"
#include "rawpipe/classical.hpp"
#include "rawpipe/degrade.hpp"
#include "rawpipe/io.hpp"
#include "rawpipe/metrics.hpp"
#include "rawpipe/pipeline.hpp"
#include "rawpipe/pixelshift.hpp"
#include "rawpipe/tinynet/network.hpp"
#include "rawpipe/tinynet/train.hpp"
#include "support/gradcheck.hpp"
#include "support/oracles.hpp"

using namespace rawpipe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<ColorImage> natural_images() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(fs::path(RAWPIPE_TEST_DATA) / "natural"))
    if (io::is_image_file(e.path())) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<ColorImage> out;
  for (const auto& f : files) out.push_back(io::read_color(f));
  return out;
}

// ------------------------------------------------------------------ 1

Outcome roundtrip() {
  Timer t;
  int bad = 0;
  for (std::uint32_t s = 0; s < 100; ++s) {
    const int h = 2 * (4 + static_cast<int>(s % 13));
    const int w = 2 * (4 + static_cast<int>((s * 7) % 11));
    const BayerMosaic m = oracle::random_mosaic(h, w, s);
    if (!(unpack(pack(m)) == m)) ++bad;
    const ColorImage img = oracle::random_color(h, w, 1000 + s);
    if (!(merge_shifts(capture_shifts(img)) == img)) ++bad;
  }
  const double secs = t.seconds();
  return {bad == 0 && secs < 1.0, std::to_string(bad) + " mismatches of 200, " +
                                      fmt("%.3f s", secs)};
}

// ------------------------------------------------------------------ 2

Outcome noise_statistics() {
  Timer t;
  const PlanarImage gray(1, 256, 256, 0.5f);
  const PlanarImage noisy = add_awgn(gray, 10.0, 7);
  double sum = 0.0, sq = 0.0;
  for (float v : noisy.values()) sum += v;
  const double n = static_cast<double>(noisy.values().size());
  const double mean = sum / n;
  for (float v : noisy.values()) sq += (v - mean) * (v - mean);
  const double std = std::sqrt(sq / (n - 1));
  const double target = 10.0 / 255.0;
  const double rel = std::abs(std - target) / target;
  const double shift = std::abs(mean - 0.5);
  const bool same = add_awgn(gray, 10.0, 7) == noisy;
  const bool differ = !(add_awgn(gray, 10.0, 8) == noisy);
  const double secs = t.seconds();
  return {rel <= 0.05 && shift < 1e-3 && same && differ && secs < 1.0,
          "std " + fmt("%.6f", std) + " vs " + fmt("%.6f", target) + " (" + fmt("%.2f", rel * 100) +
              "%), mean shift " + fmt("%.2e", shift) + ", seed repeat " +
              (same ? "identical" : "DIFFERENT") + ", " + fmt("%.3f s", secs)};
}

// ------------------------------------------------------------------ 3

Outcome demosaic_oracles() {
  Timer t;
  double worst = 0.0;
  bool constants_exact = true;
  std::uint32_t seed = 0;
  for (int h = 6; h <= 16; h += 2)
    for (int w = 6; w <= 16; w += 2) {
      const BayerMosaic m = oracle::random_mosaic(h, w, ++seed);
      worst = std::max(worst, oracle::max_abs_diff(demosaic_bilinear(m), oracle::bilinear_demosaic(m)));
      worst = std::max(worst, oracle::max_abs_diff(demosaic_malvar(m), oracle::malvar_demosaic(m)));
      for (float c : {0.0f, 0.25f, 0.5f, 1.0f}) {
        const BayerMosaic k(h, w, CfaPattern::RGGB, c);
        for (const ColorImage& out : {demosaic_bilinear(k), demosaic_malvar(k)})
          for (float v : out.values()) constants_exact = constants_exact && v == c;
      }
    }
  const double secs = t.seconds();
  return {worst < 1e-6 && constants_exact && secs < 5.0,
          "max abs error " + fmt("%.3e", worst) + ", constants " +
              (constants_exact ? "exact" : "NOT exact") + ", " + fmt("%.3f s", secs)};
}

// ------------------------------------------------------------------ 4

Outcome metric_oracles() {
  Timer t;
  double worst_psnr = 0.0, worst_ssim = 0.0;
  for (std::uint32_t s = 0; s < 8; ++s) {
    const int h = 11 + static_cast<int>(s) * 3;
    const ColorImage a = oracle::random_color(h, h + 5, s);
    ColorImage b = a;
    const PlanarImage n = add_awgn(b, 5.0 + 5.0 * s, 50 + s);
    b = ColorImage(n);
    b.clamp01();
    worst_psnr = std::max(worst_psnr, std::abs(psnr(a, b) - oracle::psnr(a, b)));
    worst_ssim = std::max(worst_ssim, std::abs(ssim(a, b) - oracle::ssim(a, b)));
  }
  const ColorImage x = oracle::random_color(24, 24, 3);
  const double self = ssim(x, x);
  // Three of 300 samples off by exactly 1: MSE = 1/100, PSNR = 20 dB.
  ColorImage a(10, 10, 0.0f), b(10, 10, 0.0f);
  b.at(0, 1, 2) = 1.0f;
  b.at(1, 5, 5) = 1.0f;
  b.at(2, 9, 0) = 1.0f;
  const double closed = psnr(a, b);
  const double secs = t.seconds();
  return {worst_psnr <= 1e-7 && worst_ssim <= 1e-7 && self == 1.0 &&
              std::abs(closed - 20.0) <= 1e-9 && secs < 5.0,
          "psnr err " + fmt("%.2e", worst_psnr) + ", ssim err " + fmt("%.2e", worst_ssim) +
              ", ssim(x,x) " + fmt("%.12f", self) + ", closed form " + fmt("%.12f dB", closed) +
              ", " + fmt("%.3f s", secs)};
}

// ------------------------------------------------------------------ 5

Outcome ordering_ranking() {
  Timer t;
  const std::vector<ColorImage> data = natural_images();
  AblationConfig cfg;
  cfg.sigma = 10.0;
  cfg.scale = 2;
  cfg.jobs = 4;
  const OrderingReport r = ablate_orders(data, cfg);
  std::fputs(r.to_csv().c_str(), stderr);
  const auto first = [&](const std::string& o) { return o.rfind("DN", 0) == 0; };
  const auto last = [&](const std::string& o) { return o.size() >= 2 && o.substr(o.size() - 2) == "DN"; };
  double min_first = 1e9, max_last = -1e9;
  for (const auto& row : r.rows) {
    if (first(row.ordering)) min_first = std::min(min_first, row.mean_psnr_db);
    if (last(row.ordering)) max_last = std::max(max_last, row.mean_psnr_db);
  }
  const double gap = min_first - max_last;
  const double sr_first = r.find("DN->SR->DM").mean_psnr_db;
  const double dm_first = r.find("DN->DM->SR").mean_psnr_db;
  const double secs = t.seconds();
  const bool pass = data.size() >= 10 && gap >= 0.3 && sr_first >= dm_first - 0.1 && secs < 120.0;
  return {pass, std::to_string(data.size()) + " images, worst DN-first minus best DN-last " +
                    fmt("%+.3f dB", gap) + " (need >= +0.3), DN->SR->DM minus DN->DM->SR " +
                    fmt("%+.3f dB", sr_first - dm_first) + " (need >= -0.1), " + fmt("%.1f s", secs)};
}

// ------------------------------------------------------------------ 6

Outcome gradients() {
  using gradcheck::check_input;
  using gradcheck::check_params;
  using namespace tinynet;
  Timer t;
  // Small enough that perturbations rarely push a pre-activation across the
  // leaky ReLU kink, large enough to stay clear of double rounding noise.
  const double eps = 1e-6;
  // Entries per parameter tensor for the composite blocks; single layers are
  // checked exhaustively.
  constexpr std::size_t kSamples = 48;
  double worst = 0.0;
  std::string where;
  auto note = [&](double e, const std::string& name) {
    if (e > worst) {
      worst = e;
      where = name;
    }
  };
  auto random_tensor = [](int n, int c, int h, int w, std::uint32_t seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Tensor4<double> x(n, c, h, w);
    for (auto& v : x.values()) v = d(gen);
    return x;
  };
  auto dot = [](const Tensor4<double>& a, const Tensor4<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.values()[i] * b.values()[i];
    return s;
  };
  NetConfig cfg;
  cfg.blocks = 1;
  cfg.feat = 8;
  RngStream rng(11, 0);

  {  // conv + leaky ReLU
    Conv2d<double> conv("conv", 3, 5);
    conv.init(rng, 1.0);
    Tensor4<double> x = random_tensor(2, 3, 6, 7, 1);
    const Tensor4<double> r = random_tensor(2, 5, 6, 7, 2);
    auto fwd = [&] {
      Tensor4<double> y(2, 5, 6, 7);
      conv.forward(x, 0, y, 0);
      leaky_relu(y, 0, 5);
      return y;
    };
    Tensor4<double> y = fwd();
    Tensor4<double> g = r;
    leaky_relu_backward(y, 0, g, 0, 5);
    conv.weight().zero_grad();
    conv.bias().zero_grad();
    Tensor4<double> gx(2, 3, 6, 7);
    conv.backward(x, 0, g, 0, &gx, 0);
    auto loss = [&] { return dot(fwd(), r); };
    const auto pc = check_params({&conv.weight(), &conv.bias()}, loss, eps, 0);
    note(pc.worst, pc.worst_name);
    note(check_input(x, gx, loss, eps, 1), "conv+lrelu input");
  }
  {  // depth_to_space
    Tensor4<double> x = random_tensor(1, 8, 3, 3, 3);
    const Tensor4<double> r = random_tensor(1, 2, 6, 6, 4);
    const Tensor4<double> gx = space_to_depth(r, 2);
    note(check_input(x, gx, [&] { return dot(depth_to_space(x, 2), r); }, eps, 1), "depth_to_space");
  }
  {  // dense block, RRDB
    DenseBlock<double> block("rdb", cfg);
    block.init(rng);
    ResidualInResidual<double> rrdb("rrdb", cfg);
    rrdb.init(rng);
    Tensor4<double> x = random_tensor(1, cfg.feat, 5, 5, 5);
    const Tensor4<double> r = random_tensor(1, cfg.feat, 5, 5, 6);
    std::vector<Parameter<double>*> pb, pr;
    block.collect(pb);
    rrdb.collect(pr);
    for (auto* p : pb) p->zero_grad();
    for (auto* p : pr) p->zero_grad();
    block.forward(x, true);
    const Tensor4<double> gb = block.backward(r);
    rrdb.forward(x, true);
    const Tensor4<double> gr = rrdb.backward(r);
    auto lb = [&] { return dot(block.forward(x, false), r); };
    auto lr = [&] { return dot(rrdb.forward(x, false), r); };
    const auto b = check_params(pb, lb, eps, kSamples);
    note(b.worst, b.worst_name);
    note(check_input(x, gb, lb, eps, 1), "dense block input");
    const auto rr = check_params(pr, lr, eps, kSamples);
    note(rr.worst, rr.worst_name);
    note(check_input(x, gr, lr, eps, 1), "rrdb input");
  }
  {  // full joint network through both losses
    JointNet<double> net(cfg);
    net.init(7);
    std::mt19937 gen(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Tensor4<double> packed(1, 4, 4, 4), gt_packed(1, 4, 8, 8), gt_color(1, 3, 16, 16);
    for (auto* tt : {&packed, &gt_packed, &gt_color})
      for (auto& v : tt->values()) v = u(gen);
    const Tensor4<double> noise(1, 1, 4, 4, 10.0 / 255.0);
    net.zero_grad();
    const Tensor4<double> sr = net.forward_f(packed, noise, true);
    const auto l = loss_total(net.forward_c(sr, true), gt_color, sr, gt_packed, 1.0);
    Tensor4<double> gsr = net.net_c().backward(l.grad_color, true);
    for (std::size_t i = 0; i < gsr.size(); ++i) gsr.values()[i] += l.grad_packed.values()[i];
    net.net_f().backward(gsr, false);
    auto loss = [&] {
      const Tensor4<double> s = net.forward_f(packed, noise);
      return loss_total(net.forward_c(s), gt_color, s, gt_packed, 1.0).total;
    };
    const auto full = check_params(net.parameters(), loss, eps, kSamples);
    note(full.worst, full.worst_name);
  }
  const double secs = t.seconds();
  return {worst < 1e-4 && secs < 60.0,
          "max per-tensor relative error " + fmt("%.3e", worst) + " (" + where + "), " +
              fmt("%.1f s", secs)};
}

// ------------------------------------------------------------------ 7

Outcome training_smoke() {
  using namespace tinynet;
  Timer t;
  const std::vector<ColorImage> data = {
      io::read_color(fs::path(RAWPIPE_TEST_DATA) / "natural" / "00_astronaut.png")};
  TrainConfig cfg;
  cfg.steps = 200;
  DegradationSpec spec;
  spec.sigma = 10.0;
  TrainResult a = train(data, cfg, spec);
  TrainResult b = train(data, cfg, spec);
  bool finite = true;
  for (const auto& r : a.curve) finite = finite && std::isfinite(r.total);
  bool deterministic = a.curve.size() == b.curve.size();
  for (std::size_t i = 0; deterministic && i < a.curve.size(); ++i)
    deterministic = a.curve[i].total == b.curve[i].total;
  const auto pa = a.net.parameters();
  const auto pb = b.net.parameters();
  for (std::size_t i = 0; deterministic && i < pa.size(); ++i)
    deterministic = pa[i]->value == pb[i]->value;
  const double first = window_mean(a.curve, 0, 20);
  const double last = window_mean(a.curve, a.curve.size() - 20, a.curve.size());
  // Two full runs are timed; the bound applies to one.
  const double secs = t.seconds() / 2.0;
  return {finite && deterministic && last < 0.5 * first && secs < 300.0,
          "first window " + fmt("%.5f", first) + ", last window " + fmt("%.5f", last) + " (" +
              fmt("%.1f%%", 100.0 * last / first) + "), " + (finite ? "finite" : "NaN") + ", " +
              (deterministic ? "deterministic" : "NOT deterministic") + ", " +
              fmt("%.1f s per run", secs)};
}

// ------------------------------------------------------------------ 8

Outcome shape_contract() {
  using namespace tinynet;
  Timer t;
  JointNet<float> net;
  net.init(0);
  DegradationSpec spec;
  spec.sigma = 10.0;
  const ColorImage gt = io::read_color(fs::path(RAWPIPE_TEST_DATA) / "natural" / "02_chelsea.png");
  const BayerMosaic m = degrade(gt, spec).lr_mosaic_noisy;
  const ColorImage whole = infer(m, 10.0, net);
  TileOptions tiles;
  tiles.tile = 32;
  const ColorImage tiled = infer(m, 10.0, net, tiles);
  const double diff = oracle::max_abs_diff(whole, tiled);
  const double secs = t.seconds();
  const bool shape = m.height() == 64 && m.width() == 64 && whole.height() == 128 &&
                     whole.width() == 128 && tiled.same_shape(whole);
  return {shape && diff <= 1e-5 && secs < 10.0,
          std::to_string(m.height()) + "x" + std::to_string(m.width()) + " mosaic -> " +
              std::to_string(whole.height()) + "x" + std::to_string(whole.width()) +
              " RGB, tiled vs untiled max diff " + fmt("%.2e", diff) + " (tile 32, margin " +
              std::to_string(tile_margin(net.config(), tiles)) + "), " + fmt("%.2f s", secs)};
}

// ------------------------------------------------------------------ 9

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

Outcome pixelshift_demo() {
  Timer t;
  const fs::path out = fs::temp_directory_path() / "rawpipe_acceptance_pixelshift";
  fs::remove_all(out);
  const std::string cmd =
      std::string("\"") + RAWPIPE_CLI + "\" pixelshift --zone-plate 256 --out \"" + out.string() + "\" -q";
  const int status = std::system(cmd.c_str());
  if (status != 0) return {false, "pixelshift subcommand exited with status " + std::to_string(status)};
  const auto rows = read_csv(out / "report.csv");
  double merged_psnr = 0, merged_err = -1, single_psnr = NAN;
  bool merged_exact = false;
  for (const auto& r : rows) {
    if (r.size() < 5) continue;
    if (r[0] == "pixelshift_merge") {
      merged_psnr = std::stod(r[1]);
      merged_err = std::stod(r[3]);
      merged_exact = r[4] == "1";
    } else if (r[0] == "single_shot_bilinear") {
      single_psnr = std::stod(r[1]);
    }
  }
  fs::remove_all(out);
  const double secs = t.seconds();
  return {merged_exact && merged_err == 0.0 && merged_psnr == 99.0 && std::isfinite(single_psnr) &&
              single_psnr < merged_psnr && secs < 10.0,
          "merged " + fmt("%.2f dB", merged_psnr) + " max err " + fmt("%.3g", merged_err) +
              ", single-shot bilinear " + fmt("%.2f dB", single_psnr) + ", " + fmt("%.2f s", secs)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {"roundtrip exactness", roundtrip},
      {"degradation statistics", noise_statistics},
      {"classical-op oracles", demosaic_oracles},
      {"metric oracles", metric_oracles},
      {"ordering ranking", ordering_ranking},
      {"gradient correctness", gradients},
      {"training smoke", training_smoke},
      {"end-to-end shape contract", shape_contract},
      {"pixel-shift demo", pixelshift_demo},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(all.size())) {
    std::fprintf(stderr, "criterion must be in 1..%zu\n", all.size());
    return 2;
  }
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (only != 0 && only != static_cast<int>(i) + 1) continue;
    Outcome o;
    try {
      o = all[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu (%s): %s: %s\n", i + 1, all[i].name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
