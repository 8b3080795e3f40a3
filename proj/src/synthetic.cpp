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

#include "pfcm/synthetic.hpp"

#include <random>

#include "pfcm/error.hpp"

namespace pfcm {

MixtureSpec four_corners(double side, double sigma) {
  return {Matrix{{0.0, 0.0}, {side, 0.0}, {0.0, side}, {side, side}}, sigma};
}

LabeledPoints sample_mixture(const MixtureSpec& spec, std::size_t n, std::uint64_t seed) {
  if (spec.means.rows() == 0) throw InvalidInput("sample_mixture: no components");
  if (!(spec.sigma >= 0.0)) throw InvalidInput("sample_mixture: sigma must be >= 0");
  const std::size_t d = spec.means.dim();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> component(0, spec.means.rows() - 1);
  std::normal_distribution<double> noise(0.0, 1.0);

  LabeledPoints out{Matrix(n, d), std::vector<std::size_t>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t c = component(rng);
    out.labels[k] = c;
    for (std::size_t j = 0; j < d; ++j)
      out.points(k, j) = spec.means(c, j) + spec.sigma * noise(rng);
  }
  return out;
}

}  // namespace pfcm
