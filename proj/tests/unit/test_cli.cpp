// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

// Drives the rawpipe executable end to end through the shell.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "rawpipe/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string err;
};

Run run_cli(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd =
      std::string("\"") + RAWPIPE_CLI + "\" " + args + " 2>\"" + err.string() + "\" >/dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  return r;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Workdir {
  fs::path path;
  explicit Workdir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path / "gt");
    for (const char* f : {"00_astronaut.png", "03_coffee.png"})
      fs::copy_file(fs::path(RAWPIPE_TEST_DATA) / "natural" / f, path / "gt" / f);
  }
  ~Workdir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("degrade is deterministic for a fixed seed and writes a manifest") {
    Workdir w("rawpipe_cli_degrade");
    const std::string gt = (w.path / "gt").string();
    REQUIRE(run_cli("degrade " + gt + " " + (w.path / "a").string() + " --sigma 10 --seed 3", w.path).code == 0);
    REQUIRE(run_cli("degrade " + gt + " " + (w.path / "b").string() + " --sigma 10 --seed 3", w.path).code == 0);
    REQUIRE(run_cli("degrade " + gt + " " + (w.path / "c").string() + " --sigma 10 --seed 4", w.path).code == 0);
    const auto manifest = lines(w.path / "a" / "manifest.csv");
    REQUIRE(manifest.size() == 3);
    CHECK(manifest[0] ==
          "name,source,hr_height,hr_width,scale,sigma,seed,lr_noisy,lr_clean,lr_color,hr_packed");
    const fs::path noisy = "00_astronaut_lr_noisy.png";
    CHECK(slurp(w.path / "a" / noisy) == slurp(w.path / "b" / noisy));
    CHECK(slurp(w.path / "a" / noisy) != slurp(w.path / "c" / noisy));
    const auto m = rawpipe::io::read_mosaic(w.path / "a" / noisy);
    CHECK(m.height() == 64);
    CHECK(m.width() == 64);
  }

  TEST_CASE("eval of a directory against itself hits the PSNR cap") {
    Workdir w("rawpipe_cli_eval");
    const std::string gt = (w.path / "gt").string();
    const std::string out = (w.path / "m.csv").string();
    REQUIRE(run_cli("eval " + gt + " " + gt + " --out " + out, w.path).code == 0);
    const auto rows = lines(out);
    REQUIRE(rows.size() >= 2);
    CHECK(rows.back().rfind("mean,99.0000,1.000000", 0) == 0);

    fs::create_directories(w.path / "other");
    fs::copy_file(w.path / "gt" / "00_astronaut.png", w.path / "other" / "x.png");
    const Run bad = run_cli("eval " + gt + " " + (w.path / "other").string(), w.path);
    CHECK(bad.code == 1);
    CHECK(bad.err.find("x.png") != std::string::npos);
  }

  TEST_CASE("train then infer: N loss rows and a 2x output") {
    Workdir w("rawpipe_cli_train");
    const std::string ckpt = (w.path / "net.bin").string();
    const std::string csv = (w.path / "loss.csv").string();
    REQUIRE(run_cli("train " + (w.path / "gt").string() + " --out " + ckpt + " --loss-csv " + csv +
                        " --steps 3 --batch 1 --patch 16 --feat 8 --growth 4 --blocks 1 -q",
                    w.path)
                .code == 0);
    const auto rows = lines(csv);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "step,L,L_joint,L_SR");

    const Run d = run_cli("degrade " + (w.path / "gt").string() + " " + (w.path / "d").string() +
                              " --sigma 10 -q",
                          w.path);
    REQUIRE(d.code == 0);
    const std::string in = (w.path / "d" / "03_coffee_lr_noisy.png").string();
    const std::string out = (w.path / "sr.png").string();
    REQUIRE(run_cli("infer " + in + " " + out + " --checkpoint " + ckpt + " --sigma 10", w.path).code == 0);
    const auto img = rawpipe::io::read_color(out);
    CHECK(img.height() == 128);
    CHECK(img.width() == 128);
  }

  TEST_CASE("errors are JSON on stderr with distinct exit codes") {
    Workdir w("rawpipe_cli_err");
    const Run missing = run_cli("eval " + (w.path / "nope").string() + " " + (w.path / "gt").string(), w.path);
    CHECK(missing.code == 1);
    CHECK(missing.err.find("{\"error\":{\"kind\":") != std::string::npos);
    const Run usage = run_cli("degrade", w.path);
    CHECK(usage.code == 2);
    const Run pattern = run_cli("degrade " + (w.path / "gt").string() + " " + (w.path / "o").string() +
                                    " --pattern BGGR",
                                w.path);
    CHECK(pattern.code == 1);
    CHECK(pattern.err.find("\"kind\":\"parameter\"") != std::string::npos);
  }

  TEST_CASE("pixelshift report") {
    Workdir w("rawpipe_cli_ps");
    const fs::path out = w.path / "ps";
    REQUIRE(run_cli("pixelshift --zone-plate 64 --out " + out.string(), w.path).code == 0);
    const auto rows = lines(out / "report.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "method,psnr_db,ssim,max_abs_err,exact");
    CHECK(rows[1].rfind("pixelshift_merge,99", 0) == 0);
    for (int i = 0; i < 4; ++i) CHECK(fs::exists(out / ("shot_" + std::to_string(i) + ".png")));
  }
}
