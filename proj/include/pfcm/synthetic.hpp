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
#include <cstdint>
#include <vector>

#include "pfcm/matrix.hpp"

namespace pfcm {

/// Isotropic Gaussian mixture with equal component probabilities.
struct MixtureSpec {
  Matrix means;
  double sigma = 0.1;
};

/// Four components at the corners of a side x side square.
MixtureSpec four_corners(double side = 10.0, double sigma = 0.1);

struct LabeledPoints {
  Matrix points;
  std::vector<std::size_t> labels;  ///< generating component
};

LabeledPoints sample_mixture(const MixtureSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace pfcm
