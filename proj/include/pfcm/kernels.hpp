// Copyright 2026 The pfcm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "pfcm/matrix.hpp"

// Data-parallel inner loops shared by the solvers and the metrics.
//
// Both kernels operate on a "column block": a set of `count` vectors stored
// dimension-major, so that coordinate j of vector i lives at
// cols[j * stride + i]. Vectorized variants run across the vectors, never
// across the dimension, and use separate multiply and add steps. Every lane
// therefore performs the same operations in the same order as the scalar
// reference, and all variants produce bit-identical results.
namespace pfcm::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view name(Isa isa) noexcept;

struct KernelTable {
  Isa isa;

  /// out[i] = sum_j (x[j] - cols[j * stride + i])^2 for i < count.
  void (*squared_distances)(const double* x, const double* cols, std::size_t count,
                            std::size_t stride, std::size_t dim, double* out);

  /// acc[j * stride + i] += scale[i] * x[j] for i < count, j < dim.
  void (*scaled_accumulate)(const double* x, const double* scale, std::size_t count,
                            std::size_t stride, std::size_t dim, double* acc);
};

const KernelTable& scalar();

/// Whether the variant is compiled in and supported by the running CPU.
bool supported(Isa isa) noexcept;

/// The table used by the library. Picks the widest supported variant on
/// first use; the PFCM_KERNELS environment variable ("scalar" or "avx2")
/// overrides the choice.
const KernelTable& active();

/// Forces a variant. Throws UnsupportedParameter if it is unavailable.
void select(Isa isa);

/// Dimension-major copy of a matrix with stride == rows.
std::vector<double> to_columns(const Matrix& m);
void to_columns(const Matrix& m, std::vector<double>& out);

namespace detail {
const KernelTable* avx2_table() noexcept;
}  // namespace detail

}  // namespace pfcm::kernels
