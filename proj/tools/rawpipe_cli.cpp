// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

// rawpipe command-line front end. Logs go to stderr, data goes to files.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rawpipe/bayer.hpp"
#include "rawpipe/classical.hpp"
#include "rawpipe/degrade.hpp"
#include "rawpipe/error.hpp"
#include "rawpipe/io.hpp"
#include "rawpipe/metrics.hpp"
#include "rawpipe/pipeline.hpp"
#include "rawpipe/pixelshift.hpp"
#include "rawpipe/tinynet/checkpoint.hpp"
#include "rawpipe/tinynet/train.hpp"

namespace fs = std::filesystem;
using namespace rawpipe;

namespace {

bool g_quiet = false;
std::mutex g_log_mutex;

template <class... Args>
void log(const Args&... args) {
  if (g_quiet) return;
  std::ostringstream os;
  os << "[rawpipe] ";
  (os << ... << args);
  std::lock_guard lock(g_log_mutex);
  std::cerr << os.str() << '\n';
}

// Runs fn(i) for i in [0, n) on `jobs` threads. Rethrows the first failure
// (lowest index) after all workers have joined.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs <= 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < std::min<int>(jobs, static_cast<int>(n)); ++j) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && io::is_image_file(entry.path())) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  os << text;
  if (!os) throw IoError("error writing " + path.string());
}

// "key=value;key=value" (also ',' separated).
std::map<std::string, std::string> parse_kv(const std::string& s) {
  std::map<std::string, std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ';')) {
    std::istringstream inner(item);
    std::string kv;
    while (std::getline(inner, kv, ',')) {
      if (kv.empty()) continue;
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParameterError("expected key=value, got '" + kv + "'");
      out[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }
  return out;
}

// ------------------------------------------------------------------ degrade

struct DegradeArgs {
  std::string in_dir, out_dir;
  int scale = 2;
  double sigma = 10.0;
  std::string pattern = "RGGB";
};

int cmd_degrade(const DegradeArgs& a, std::uint64_t seed, int jobs) {
  const CfaPattern pattern = parse_cfa_pattern(a.pattern);
  const auto files = list_images(a.in_dir);
  fs::create_directories(a.out_dir);

  struct Row {
    bool ok = false;
    std::string line;
  };
  std::vector<Row> rows(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    const fs::path& src = files[i];
    const std::string stem = src.stem().string();
    DegradationSpec spec;
    spec.scale = a.scale;
    spec.sigma = a.sigma;
    spec.seed = image_seed(seed, i);
    spec.pattern = pattern;
    DegradedPair pair;
    try {
      const ColorImage img = io::read_color(src);
      pair = degrade(img, spec);
    } catch (const Error& e) {
      log("skipping ", src.string(), ": ", e.what());
      return;
    }
    const fs::path out(a.out_dir);
    const std::string noisy = stem + "_lr_noisy.png";
    const std::string clean = stem + "_lr_clean.png";
    const std::string color = stem + "_lr_color.png";
    const std::string packed = stem + "_hr_packed.png";
    io::write_image(out / noisy, pair.lr_mosaic_noisy);
    io::write_image(out / clean, pair.lr_mosaic_clean);
    io::write_image(out / color, pair.lr_color);
    io::write_image(out / packed, pair.gt_hr_packed);
    std::ostringstream os;
    os << stem << ',' << src.filename().string() << ',' << pair.gt_hr_color.height() << ','
       << pair.gt_hr_color.width() << ',' << a.scale << ',' << a.sigma << ',' << spec.seed << ','
       << noisy << ',' << clean << ',' << color << ',' << packed;
    rows[i] = {true, os.str()};
  });

  std::string manifest =
      "name,source,hr_height,hr_width,scale,sigma,seed,lr_noisy,lr_clean,lr_color,hr_packed\n";
  int accepted = 0;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    manifest += r.line + '\n';
    ++accepted;
  }
  write_text(fs::path(a.out_dir) / "manifest.csv", manifest);
  log("degraded ", accepted, " of ", files.size(), " images into ", a.out_dir);
  return 0;
}

// ------------------------------------------------------------------- ablate

struct AblateArgs {
  std::string gt_dir;
  double sigma = 10.0;
  int scale = 2;
  std::string ops;
  std::string out = "ablation.csv";
};

std::vector<ColorImage> load_dataset(const std::string& dir, int jobs) {
  const auto files = list_images(dir);
  std::vector<ColorImage> images(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) { images[i] = io::read_color(files[i]); });
  if (images.empty()) throw ParameterError("no images found in " + dir);
  return images;
}

int cmd_ablate(const AblateArgs& a, std::uint64_t seed, int jobs) {
  AblationConfig cfg;
  cfg.sigma = a.sigma;
  cfg.scale = a.scale;
  cfg.seed = seed;
  cfg.jobs = jobs;
  for (const auto& [k, v] : parse_kv(a.ops)) {
    if (k == "demosaic") {
      cfg.demosaic = parse_demosaic_method(v);
    } else if (k == "denoise_gain") {
      cfg.denoise_gain = std::stod(v);
    } else {
      throw ParameterError("unknown --ops key '" + k + "' (demosaic, denoise_gain)");
    }
  }
  const auto dataset = load_dataset(a.gt_dir, jobs);
  log("ablating 6 orderings on ", dataset.size(), " images, sigma=", a.sigma, " scale=", a.scale,
      " demosaic=", to_string(cfg.demosaic));
  const OrderingReport report = ablate_orders(dataset, cfg);
  write_text(a.out, report.to_csv());
  for (const auto& r : report.rows)
    log(std::left, std::setw(12), r.ordering, std::fixed, std::setprecision(3), r.mean_psnr_db,
        " dB  ssim ", std::setprecision(4), r.mean_ssim);
  for (const auto& j : report.joint_rows_requiring_weights)
    log("joint variant ", j, ": requires trained network weights, not run");
  return 0;
}

// -------------------------------------------------------------------- train

struct TrainArgs {
  std::string data_dir;
  std::string out = "model.ckpt";
  std::string loss_csv = "loss.csv";
  int steps = 200;
  int batch = 4;
  int patch = 64;
  double lr = 1e-4;
  double lambda = 1.0;
  double sigma = 10.0;
  int feat = 32;
  int growth = 16;
  int blocks = 2;
};

int cmd_train(const TrainArgs& a, std::uint64_t seed, int jobs) {
  tinynet::TrainConfig cfg;
  cfg.steps = a.steps;
  cfg.batch = a.batch;
  cfg.hr_patch = a.patch;
  cfg.adam.lr = a.lr;
  cfg.lambda = a.lambda;
  cfg.seed = seed;
  cfg.net.feat = a.feat;
  cfg.net.growth = a.growth;
  cfg.net.blocks = a.blocks;
  DegradationSpec spec;
  spec.scale = 2;
  spec.sigma = a.sigma;
  spec.seed = seed;
  const auto dataset = load_dataset(a.data_dir, jobs);
  log("training ", a.steps, " steps on ", dataset.size(), " images (batch ", a.batch, ", patch ",
      a.patch, ")");
  const int every = std::max(1, a.steps / 20);
  auto result = tinynet::train(dataset, cfg, spec, [&](const tinynet::LossRecord& r) {
    if (r.step % every == 0 || r.step + 1 == a.steps)
      log("step ", r.step, " L=", r.total, " L_joint=", r.joint, " L_SR=", r.sr);
  });
  tinynet::save_checkpoint(a.out, result.net);
  write_text(a.loss_csv, tinynet::loss_curve_csv(result.curve));
  log("wrote ", a.out, " and ", a.loss_csv);
  return 0;
}

// -------------------------------------------------------------------- infer

struct InferArgs {
  std::string input, output, checkpoint;
  double sigma = 10.0;
  int tile = 0;
  int overlap = 8;
  bool approximate = false;
};

int cmd_infer(const InferArgs& a) {
  auto net = tinynet::load_checkpoint(a.checkpoint);
  const BayerMosaic mosaic = io::read_mosaic(a.input);
  tinynet::TileOptions tiles;
  tiles.tile = a.tile;
  tiles.overlap = a.overlap;
  tiles.exact = !a.approximate;
  const ColorImage out = tinynet::infer(mosaic, a.sigma, net, tiles);
  if (fs::path(a.output).has_parent_path()) fs::create_directories(fs::path(a.output).parent_path());
  io::write_image(a.output, out);
  log("wrote ", a.output, " (", out.height(), "x", out.width(), ")");
  return 0;
}

// --------------------------------------------------------------------- eval

struct EvalArgs {
  std::string dir_a, dir_b;
  std::string out = "metrics.csv";
  std::string method;
  double sigma = 0.0;
  int scale = 1;
};

int cmd_eval(const EvalArgs& a, int jobs) {
  auto names = [](const std::vector<fs::path>& files) {
    std::map<std::string, fs::path> m;
    for (const auto& f : files) m[f.filename().string()] = f;
    return m;
  };
  const auto fa = names(list_images(a.dir_a));
  const auto fb = names(list_images(a.dir_b));
  std::vector<std::string> offenders;
  for (const auto& [n, p] : fa)
    if (!fb.count(n)) offenders.push_back(n + " (missing in " + a.dir_b + ")");
  for (const auto& [n, p] : fb)
    if (!fa.count(n)) offenders.push_back(n + " (missing in " + a.dir_a + ")");
  if (!offenders.empty()) {
    std::string msg = "filename mismatch between directories:";
    for (const auto& o : offenders) msg += " " + o + ";";
    throw ParameterError(msg);
  }
  if (fa.empty()) throw ParameterError("no images to evaluate");

  std::vector<std::pair<fs::path, fs::path>> pairs;
  for (const auto& [n, p] : fa) pairs.emplace_back(p, fb.at(n));
  MetricsReport report;
  report.images.resize(pairs.size());
  report.method = a.method;
  report.sigma = a.sigma;
  report.scale = a.scale;
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    const PlanarImage x = io::read_image(pairs[i].first);
    const PlanarImage y = io::read_image(pairs[i].second);
    report.images[i] = {pairs[i].first.filename().string(), psnr(x, y), ssim(x, y)};
  });
  report.finalize();
  write_text(a.out, report.to_csv());
  log("evaluated ", pairs.size(), " pairs: mean PSNR ", report.mean_psnr_db, " dB, mean SSIM ",
      report.mean_ssim);
  return 0;
}

// --------------------------------------------------------------- pixelshift

struct PixelShiftArgs {
  std::string input;
  int zone_plate = 256;
  double max_frequency = 0.5;
  std::string out_dir = "pixelshift";
};

int cmd_pixelshift(const PixelShiftArgs& a) {
  const ColorImage scene = a.input.empty() ? zone_plate(a.zone_plate, a.max_frequency)
                                           : io::read_color(a.input);
  const fs::path out(a.out_dir);
  fs::create_directories(out);
  const auto shots = capture_shifts(scene);
  for (std::size_t i = 0; i < shots.size(); ++i)
    io::write_image(out / ("shot_" + std::to_string(i) + ".png"), shots[i].mosaic);
  const ColorImage merged = merge_shifts(shots);
  const ColorImage single = demosaic_bilinear(shots[0].mosaic);
  io::write_image(out / "scene.png", scene);
  io::write_image(out / "merged.png", merged);
  io::write_image(out / "bilinear.png", single);

  auto max_abs = [&](const ColorImage& img) {
    double m = 0.0;
    const auto x = img.values();
    const auto y = scene.values();
    for (std::size_t i = 0; i < x.size(); ++i)
      m = std::max(m, std::abs(static_cast<double>(x[i]) - static_cast<double>(y[i])));
    return m;
  };
  std::ostringstream os;
  os << "method,psnr_db,ssim,max_abs_err,exact\n" << std::setprecision(10);
  const double merged_err = max_abs(merged);
  os << "pixelshift_merge," << psnr(merged, scene) << ',' << ssim(merged, scene) << ','
     << merged_err << ',' << (merged_err == 0.0 ? 1 : 0) << '\n';
  const double single_err = max_abs(single);
  os << "single_shot_bilinear," << psnr(single, scene) << ',' << ssim(single, scene) << ','
     << single_err << ',' << (single_err == 0.0 ? 1 : 0) << '\n';
  write_text(out / "report.csv", os.str());
  log("pixel-shift report written to ", (out / "report.csv").string());
  return 0;
}

void print_error(const std::string& kind, const std::string& message) {
  nlohmann::json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rawpipe: raw image denoising, super-resolution and demosaicing toolkit"};
  app.set_config("--config", "", "Read options from a TOML/INI file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  int jobs = 1;
  app.add_option("--seed", seed, "Random seed")->envname("RAWPIPE_SEED");
  app.add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--quiet,-q", g_quiet, "Suppress log output");

  DegradeArgs deg;
  auto* c_deg = app.add_subcommand("degrade", "Synthesize LR noisy mosaics and HR targets");
  c_deg->add_option("in_dir", deg.in_dir, "Directory of ground-truth images")->required();
  c_deg->add_option("out_dir", deg.out_dir, "Output directory")->required();
  c_deg->add_option("--scale", deg.scale, "Downsampling factor")->capture_default_str();
  c_deg->add_option("--sigma", deg.sigma, "Noise std on the 0-255 scale")->capture_default_str();
  c_deg->add_option("--pattern", deg.pattern, "CFA pattern")->capture_default_str();

  AblateArgs abl;
  auto* c_abl = app.add_subcommand("ablate", "Compare the six DN/SR/DM orderings");
  c_abl->add_option("gt_dir", abl.gt_dir, "Directory of ground-truth images")->required();
  c_abl->add_option("--sigma", abl.sigma, "Noise std on the 0-255 scale")->capture_default_str();
  c_abl->add_option("--scale", abl.scale, "SR factor")->capture_default_str();
  c_abl->add_option("--ops", abl.ops, "Operator settings, e.g. demosaic=malvar;denoise_gain=20");
  c_abl->add_option("--out", abl.out, "Report CSV")->capture_default_str();

  TrainArgs tr;
  auto* c_tr = app.add_subcommand("train", "Train the joint network");
  c_tr->add_option("data_dir", tr.data_dir, "Directory of ground-truth images")->required();
  c_tr->add_option("--out", tr.out, "Checkpoint path")->capture_default_str();
  c_tr->add_option("--loss-csv", tr.loss_csv, "Loss curve CSV")->capture_default_str();
  c_tr->add_option("--steps", tr.steps)->capture_default_str();
  c_tr->add_option("--batch", tr.batch)->capture_default_str();
  c_tr->add_option("--patch", tr.patch, "HR crop size")->capture_default_str();
  c_tr->add_option("--lr", tr.lr)->capture_default_str();
  c_tr->add_option("--lambda", tr.lambda, "Weight of the mosaic SR loss")->capture_default_str();
  c_tr->add_option("--sigma", tr.sigma, "Training noise std, 0-255")->capture_default_str();
  c_tr->add_option("--feat", tr.feat)->capture_default_str();
  c_tr->add_option("--growth", tr.growth)->capture_default_str();
  c_tr->add_option("--blocks", tr.blocks)->capture_default_str();

  InferArgs inf;
  auto* c_inf = app.add_subcommand("infer", "Run the joint network on a noisy LR mosaic");
  c_inf->add_option("input", inf.input, "Single-channel mosaic image")->required();
  c_inf->add_option("output", inf.output, "Output RGB image")->required();
  c_inf->add_option("--checkpoint", inf.checkpoint)->required();
  c_inf->add_option("--sigma", inf.sigma, "Noise std of the input, 0-255")->capture_default_str();
  c_inf->add_option("--tile", inf.tile, "Tile size in mosaic pixels (0 = whole image)")
      ->capture_default_str();
  c_inf->add_option("--overlap", inf.overlap, "Minimum tile context")->capture_default_str();
  c_inf->add_flag("--approximate", inf.approximate,
                  "Use exactly --overlap as tile context instead of the receptive radius");

  EvalArgs ev;
  auto* c_ev = app.add_subcommand("eval", "PSNR/SSIM between two directories");
  c_ev->add_option("dir_a", ev.dir_a)->required();
  c_ev->add_option("dir_b", ev.dir_b)->required();
  c_ev->add_option("--out", ev.out, "Metrics CSV")->capture_default_str();
  c_ev->add_option("--method", ev.method, "Label stored with the report");
  c_ev->add_option("--sigma", ev.sigma, "Label stored with the report");
  c_ev->add_option("--scale", ev.scale, "Label stored with the report");

  PixelShiftArgs ps;
  auto* c_ps = app.add_subcommand("pixelshift", "Simulate a four-shot pixel-shift capture");
  c_ps->add_option("--input", ps.input, "Scene image (default: synthetic zone plate)");
  c_ps->add_option("--zone-plate", ps.zone_plate, "Zone plate size")->capture_default_str();
  c_ps->add_option("--max-frequency", ps.max_frequency)->capture_default_str();
  c_ps->add_option("--out", ps.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (*c_deg) return cmd_degrade(deg, seed, jobs);
    if (*c_abl) return cmd_ablate(abl, seed, jobs);
    if (*c_tr) return cmd_train(tr, seed, jobs);
    if (*c_inf) return cmd_infer(inf);
    if (*c_ev) return cmd_eval(ev, jobs);
    if (*c_ps) return cmd_pixelshift(ps);
  } catch (const Error& e) {
    print_error(e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 1;
}
