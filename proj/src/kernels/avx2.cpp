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

// Compiled with -mavx2 when the toolchain targets x86-64. Only reached
// through the dispatcher after a CPUID check.

#include "pfcm/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace pfcm::kernels {

#if defined(__AVX2__)
namespace {

void squared_distances_avx2(const double* x, const double* cols, std::size_t count,
                            std::size_t stride, std::size_t dim, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < dim; ++j) {
      const __m256d xj = _mm256_set1_pd(x[j]);
      const __m256d c = _mm256_loadu_pd(cols + j * stride + i);
      const __m256d diff = _mm256_sub_pd(xj, c);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  // Tail.
  for (; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double diff = x[j] - cols[j * stride + i];
      acc = acc + diff * diff;
    }
    out[i] = acc;
  }
}

void scaled_accumulate_avx2(const double* x, const double* scale, std::size_t count,
                            std::size_t stride, std::size_t dim, double* acc) {
  for (std::size_t j = 0; j < dim; ++j) {
    const __m256d xj = _mm256_set1_pd(x[j]);
    double* col = acc + j * stride;
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
      const __m256d s = _mm256_loadu_pd(scale + i);
      const __m256d a = _mm256_loadu_pd(col + i);
      _mm256_storeu_pd(col + i, _mm256_add_pd(a, _mm256_mul_pd(s, xj)));
    }
    for (; i < count; ++i) col[i] = col[i] + scale[i] * x[j];
  }
}

constexpr KernelTable kAvx2Table{Isa::kAvx2, &squared_distances_avx2,
                                 &scaled_accumulate_avx2};

}  // namespace

const KernelTable* detail::avx2_table() noexcept { return &kAvx2Table; }

#else

const KernelTable* detail::avx2_table() noexcept { return nullptr; }

#endif

}  // namespace pfcm::kernels
