// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"
#include "rawpipe/error.hpp"

namespace rawpipe::simd {
namespace {

bool cpu_has_avx2_fma() noexcept {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma") &&
         detail::avx2_f32() != nullptr;
#else
  return false;
#endif
}

Level initial_level() noexcept {
  const char* env = std::getenv("RAWPIPE_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Level::Scalar;
  return detected_level();
}

std::atomic<Level>& level_slot() noexcept {
  static std::atomic<Level> slot{initial_level()};
  return slot;
}

}  // namespace

const char* to_string(Level level) noexcept {
  switch (level) {
    case Level::Scalar: return "scalar";
    case Level::Avx2: return "avx2";
  }
  return "?";
}

Level detected_level() noexcept {
  static const Level level = cpu_has_avx2_fma() ? Level::Avx2 : Level::Scalar;
  return level;
}

bool level_supported(Level level) noexcept {
  return level == Level::Scalar || detected_level() == Level::Avx2;
}

Level active_level() noexcept { return level_slot().load(std::memory_order_relaxed); }

void set_level(Level level) {
  if (!level_supported(level))
    throw ParameterError(std::string("SIMD level ") + to_string(level) +
                         " is not supported on this CPU");
  level_slot().store(level, std::memory_order_relaxed);
}

template <>
const Kernels<float>& kernels<float>(Level level) {
  if (level == Level::Avx2 && level_supported(Level::Avx2)) return *detail::avx2_f32();
  return detail::scalar_f32();
}

template <>
const Kernels<double>& kernels<double>(Level level) {
  if (level == Level::Avx2 && level_supported(Level::Avx2)) return *detail::avx2_f64();
  return detail::scalar_f64();
}

double sum_squared_diff(const float* a, const float* b, std::size_t n, Level level) {
  if (level == Level::Avx2 && level_supported(Level::Avx2))
    return detail::avx2_sum_squared_diff(a, b, n);
  return detail::scalar_sum_squared_diff(a, b, n);
}

}  // namespace rawpipe::simd
