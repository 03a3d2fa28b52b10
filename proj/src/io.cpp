// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "rawpipe/io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace rawpipe::io {
namespace {

std::string lower_ext(const std::filesystem::path& p) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e;
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

std::uint32_t quantize(float v, std::uint32_t maxval) {
  const double c = std::clamp(static_cast<double>(v), 0.0, 1.0);
  return static_cast<std::uint32_t>(std::lround(c * maxval));
}

PlanarImage read_png(const std::filesystem::path& path) {
  FilePtr f = open_file(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw FormatError(path.string() + " is not a PNG file");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) throw IoError("libpng initialisation failed");
  std::vector<png_bytep> rows;
  std::vector<png_byte> buffer;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("corrupt PNG " + path.string());
  }
  png_init_io(png, f.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (depth == 16) png_set_swap(png);  // native little-endian 16-bit samples
  png_read_update_info(png, info);

  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  const int ch = png_get_channels(png, info);
  const int bd = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  buffer.resize(rowbytes * h);
  rows.resize(h);
  for (int y = 0; y < h; ++y) rows[y] = buffer.data() + rowbytes * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  PlanarImage img(ch, h, w);
  const float scale = bd == 16 ? 1.0f / 65535.0f : 1.0f / 255.0f;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        const std::size_t i = static_cast<std::size_t>(x) * ch + c;
        std::uint32_t v;
        if (bd == 16) {
          std::uint16_t s;
          std::memcpy(&s, rows[y] + 2 * i, 2);
          v = s;
        } else {
          v = rows[y][i];
        }
        img.at(c, y, x) = static_cast<float>(v) * scale;
      }
    }
  }
  return img;
}

void write_png(const std::filesystem::path& path, const PlanarImage& img, int bit_depth) {
  int color;
  switch (img.channels()) {
    case 1: color = PNG_COLOR_TYPE_GRAY; break;
    case 3: color = PNG_COLOR_TYPE_RGB; break;
    case 4: color = PNG_COLOR_TYPE_RGBA; break;
    default: throw DimensionError("PNG output supports 1, 3 or 4 planes");
  }
  const int ch = img.channels();
  const int w = img.width();
  const int h = img.height();
  const std::uint32_t maxval = bit_depth == 16 ? 65535u : 255u;
  const std::size_t bps = bit_depth == 16 ? 2 : 1;
  std::vector<png_byte> buffer(static_cast<std::size_t>(w) * h * ch * bps);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        const std::size_t i = (static_cast<std::size_t>(y) * w + x) * ch + c;
        const std::uint32_t v = quantize(img.at(c, y, x), maxval);
        if (bps == 2) {
          buffer[2 * i] = static_cast<png_byte>(v >> 8);  // PNG is big-endian
          buffer[2 * i + 1] = static_cast<png_byte>(v & 0xff);
        } else {
          buffer[i] = static_cast<png_byte>(v);
        }
      }
    }
  }
  FilePtr f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) throw IoError("libpng initialisation failed");
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed writing " + path.string());
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, w, h, bit_depth, color, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(w) * ch * bps;
  for (int y = 0; y < h; ++y) png_write_row(png, buffer.data() + stride * y);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// Binary PNM (P5/P6), maxval up to 65535.
PlanarImage read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  auto token = [&]() {
    std::string t;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        std::string skip;
        std::getline(in, skip);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!t.empty()) break;
        continue;
      }
      t += c;
    }
    return t;
  };
  const std::string magic = token();
  if (magic != "P5" && magic != "P6") throw FormatError(path.string() + ": unsupported PNM type");
  const int ch = magic == "P5" ? 1 : 3;
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(token());
    h = std::stoi(token());
    maxval = std::stoi(token());
  } catch (const std::exception&) {
    throw FormatError(path.string() + ": malformed PNM header");
  }
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
    throw FormatError(path.string() + ": invalid PNM header values");
  const std::size_t bps = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h * ch * bps);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
    throw FormatError(path.string() + ": truncated PNM data");
  PlanarImage img(ch, h, w);
  const float scale = 1.0f / static_cast<float>(maxval);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < ch; ++c) {
        const std::size_t i = (static_cast<std::size_t>(y) * w + x) * ch + c;
        const std::uint32_t v = bps == 2 ? (raw[2 * i] << 8) | raw[2 * i + 1] : raw[i];
        img.at(c, y, x) = static_cast<float>(v) * scale;
      }
  return img;
}

void write_pnm(const std::filesystem::path& path, const PlanarImage& img, int bit_depth) {
  const int ch = img.channels();
  const std::uint32_t maxval = bit_depth == 16 ? 65535u : 255u;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << (ch == 1 ? "P5" : "P6") << '\n' << img.width() << ' ' << img.height() << '\n'
      << maxval << '\n';
  std::vector<unsigned char> raw;
  raw.reserve(img.size() * (bit_depth == 16 ? 2 : 1));
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < ch; ++c) {
        const std::uint32_t v = quantize(img.at(c, y, x), maxval);
        if (bit_depth == 16) raw.push_back(static_cast<unsigned char>(v >> 8));
        raw.push_back(static_cast<unsigned char>(v & 0xff));
      }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

PlanarImage read_image(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return read_pnm(path);
  throw FormatError("unsupported image extension '" + ext + "' for " + path.string());
}

ColorImage read_color(const std::filesystem::path& path) {
  PlanarImage img = read_image(path);
  if (img.channels() == 3) return ColorImage(std::move(img));
  if (img.channels() == 4) {
    ColorImage out(img.height(), img.width());
    for (int c = 0; c < 3; ++c) std::copy(img.plane(c).begin(), img.plane(c).end(), out.plane(c).begin());
    return out;
  }
  throw FormatError(path.string() + ": expected an RGB image, got " +
                    std::to_string(img.channels()) + " channel(s)");
}

BayerMosaic read_mosaic(const std::filesystem::path& path) {
  PlanarImage img = read_image(path);
  if (img.channels() != 1)
    throw FormatError(path.string() + ": mosaic files must be single-channel");
  return BayerMosaic(std::move(img), CfaPattern::RGGB);
}

void write_image(const std::filesystem::path& path, const PlanarImage& img, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) throw ParameterError("bit depth must be 8 or 16");
  const std::string ext = lower_ext(path);
  if (ext == ".png") return write_png(path, img, bit_depth);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
    if ((ext == ".pgm" && img.channels() != 1) || (ext == ".ppm" && img.channels() != 3) ||
        (img.channels() != 1 && img.channels() != 3))
      throw DimensionError(path.string() + ": PNM channel count mismatch");
    return write_pnm(path, img, bit_depth);
  }
  throw FormatError("unsupported image extension '" + ext + "' for " + path.string());
}

bool is_image_file(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

}  // namespace rawpipe::io
