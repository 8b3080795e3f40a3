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

#include "pfcm/kernels.hpp"

namespace pfcm::kernels {
namespace {

void squared_distances_scalar(const double* x, const double* cols, std::size_t count,
                              std::size_t stride, std::size_t dim, double* out) {
  for (std::size_t i = 0; i < count; ++i) out[i] = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double xj = x[j];
    const double* col = cols + j * stride;
    for (std::size_t i = 0; i < count; ++i) {
      const double diff = xj - col[i];
      out[i] = out[i] + diff * diff;
    }
  }
}

void scaled_accumulate_scalar(const double* x, const double* scale, std::size_t count,
                              std::size_t stride, std::size_t dim, double* acc) {
  for (std::size_t j = 0; j < dim; ++j) {
    const double xj = x[j];
    double* col = acc + j * stride;
    for (std::size_t i = 0; i < count; ++i) col[i] = col[i] + scale[i] * xj;
  }
}

constexpr KernelTable kScalarTable{Isa::kScalar, &squared_distances_scalar,
                                   &scaled_accumulate_scalar};

}  // namespace

const KernelTable& scalar() { return kScalarTable; }

}  // namespace pfcm::kernels
