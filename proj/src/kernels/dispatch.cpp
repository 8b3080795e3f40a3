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

#include <atomic>
#include <cstdlib>
#include <string>

#include "pfcm/error.hpp"
#include "pfcm/kernels.hpp"

namespace pfcm::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  const char* env = std::getenv("PFCM_KERNELS");
  if (env != nullptr && std::string(env) == "scalar") return &scalar();
  if (supported(Isa::kAvx2)) return detail::avx2_table();
  return &scalar();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
      return detail::avx2_table() != nullptr && cpu_has_avx2();
  }
  return false;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
  if (!supported(isa))
    throw UnsupportedParameter("kernel variant '" + std::string(name(isa)) +
                               "' is not available on this machine");
  current().store(isa == Isa::kScalar ? &scalar() : detail::avx2_table(),
                  std::memory_order_release);
}

std::vector<double> to_columns(const Matrix& m) {
  std::vector<double> out;
  to_columns(m, out);
  return out;
}

void to_columns(const Matrix& m, std::vector<double>& out) {
  const std::size_t n = m.rows();
  const std::size_t d = m.dim();
  out.resize(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out[j * n + i] = m(i, j);
}

}  // namespace pfcm::kernels
