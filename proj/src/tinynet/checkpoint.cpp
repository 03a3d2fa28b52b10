// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "rawpipe/tinynet/checkpoint.hpp"

#include <bit>
#include <algorithm>
#include <cstring>
#include <type_traits>
#include <fstream>

namespace rawpipe::tinynet {
namespace {

constexpr char kMagic[8] = {'R', 'P', 'J', 'N', 'E', 'T', '\0', '\0'};

template <class U>
void put(std::ostream& os, U v) {
  static_assert(std::is_trivially_copyable_v<U>);
  unsigned char b[sizeof(U)];
  std::memcpy(b, &v, sizeof(U));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(U));
  os.write(reinterpret_cast<const char*>(b), sizeof(U));
}

template <class U>
U get(std::istream& is, const std::string& path) {
  unsigned char b[sizeof(U)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(U)))
    throw FormatError("checkpoint " + path + ": truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(U));
  U v;
  std::memcpy(&v, b, sizeof(U));
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, JointNet<float>& net) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write checkpoint " + path);
  const NetConfig& cfg = net.config();
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, kCheckpointVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(cfg.feat));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(cfg.growth));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(cfg.blocks));
  put<double>(os, cfg.beta);
  const auto params = net.parameters();
  put<std::uint32_t>(os, static_cast<std::uint32_t>(params.size()));
  for (const auto* p : params) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(p->name.size()));
    os.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(p->dims.size()));
    for (int d : p->dims) put<std::uint32_t>(os, static_cast<std::uint32_t>(d));
    for (float v : p->value) put<float>(os, v);
  }
  if (!os) throw IoError("error writing checkpoint " + path);
}

JointNet<float> load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint " + path);
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw FormatError("checkpoint " + path + ": bad magic");
  const auto version = get<std::uint32_t>(is, path);
  if (version != kCheckpointVersion)
    throw FormatError("checkpoint " + path + ": unsupported version " + std::to_string(version));
  NetConfig cfg;
  cfg.feat = static_cast<int>(get<std::uint32_t>(is, path));
  cfg.growth = static_cast<int>(get<std::uint32_t>(is, path));
  cfg.blocks = static_cast<int>(get<std::uint32_t>(is, path));
  cfg.beta = get<double>(is, path);
  try {
    cfg.validate();
  } catch (const ParameterError& e) {
    throw FormatError("checkpoint " + path + ": " + e.what());
  }
  JointNet<float> net(cfg);
  const auto params = net.parameters();
  const auto count = get<std::uint32_t>(is, path);
  if (count != params.size())
    throw FormatError("checkpoint " + path + ": expected " + std::to_string(params.size()) +
                      " tensors, found " + std::to_string(count));
  for (auto* p : params) {
    const auto len = get<std::uint32_t>(is, path);
    if (len > 4096) throw FormatError("checkpoint " + path + ": implausible name length");
    std::string name(len, '\0');
    if (!is.read(name.data(), len)) throw FormatError("checkpoint " + path + ": truncated");
    if (name != p->name)
      throw FormatError("checkpoint " + path + ": expected tensor " + p->name + ", found " + name);
    const auto ndims = get<std::uint32_t>(is, path);
    std::vector<int> dims(ndims);
    for (auto& d : dims) d = static_cast<int>(get<std::uint32_t>(is, path));
    if (dims != p->dims) throw FormatError("checkpoint " + path + ": shape mismatch for " + name);
    for (auto& v : p->value) v = get<float>(is, path);
  }
  return net;
}

}  // namespace rawpipe::tinynet
