// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

namespace rawpipe::simd {

/// Instruction-set level of a kernel table. `Avx2` requires both AVX2 and FMA.
enum class Level { Scalar, Avx2 };

const char* to_string(Level level) noexcept;

/// Highest level supported by the running CPU.
Level detected_level() noexcept;

/// Level used by kernels<T>(). Starts at detected_level() unless the
/// environment variable RAWPIPE_SIMD=scalar is set.
Level active_level() noexcept;

/// Overrides the active level. Throws ParameterError if the CPU lacks it.
void set_level(Level level);

bool level_supported(Level level) noexcept;

/// Hot inner loops used by the image operators and the network. Every level
/// implements the same contract; results agree up to floating-point
/// reassociation (and FMA contraction on Avx2).
template <class T>
struct Kernels {
  /// C[m x n] += op(A)[m x k] * op(B)[k x n], row-major with leading
  /// dimensions lda/ldb/ldc. op(X) is X or X^T depending on the flag; the
  /// leading dimension always refers to the stored (untransposed) matrix.
  void (*gemm)(bool trans_a, bool trans_b, int m, int n, int k, const T* a, int lda, const T* b,
               int ldb, T* c, int ldc);

  /// Valid-mode correlation: out[i] = sum_t taps[t] * in[i + t] for
  /// i in [0, n). `in` must hold n + ntaps - 1 values.
  void (*fir)(const T* in, int n, const T* taps, int ntaps, T* out);

  /// y[i] += alpha * x[i].
  void (*axpy)(int n, T alpha, const T* x, T* y);

  Level level;
};

template <class T>
const Kernels<T>& kernels(Level level);
template <>
const Kernels<float>& kernels<float>(Level level);
template <>
const Kernels<double>& kernels<double>(Level level);

template <class T>
const Kernels<T>& kernels() {
  return kernels<T>(active_level());
}

/// sum_i (a[i] - b[i])^2 accumulated in double precision.
double sum_squared_diff(const float* a, const float* b, std::size_t n, Level level);
inline double sum_squared_diff(const float* a, const float* b, std::size_t n) {
  return sum_squared_diff(a, b, n, active_level());
}

}  // namespace rawpipe::simd
