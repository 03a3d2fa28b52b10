// Copyright 2026 The rawpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rawpipe/simd/kernels.hpp"

namespace rawpipe::simd::detail {

const Kernels<float>& scalar_f32();
const Kernels<double>& scalar_f64();
double scalar_sum_squared_diff(const float* a, const float* b, std::size_t n);

// Null when the library was built for a target without the AVX2 kernels.
const Kernels<float>* avx2_f32();
const Kernels<double>* avx2_f64();
double avx2_sum_squared_diff(const float* a, const float* b, std::size_t n);

}  // namespace rawpipe::simd::detail
