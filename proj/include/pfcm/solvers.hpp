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
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "pfcm/matrix.hpp"

namespace pfcm {

struct FcmParams {
  std::size_t c = 2;               ///< clusters produced by this solve
  std::size_t c_intermediate = 2;  ///< clusters per combiner in the pipeline
  double m = 2.0;                  ///< fuzzifier, > 1
  double epsilon = 5.0e-7;         ///< stop when max squared center shift <= epsilon
  std::size_t max_iterations = 1000;
  std::uint64_t seed = 42;
  /// Evaluate the final objective (one extra pass over the points).
  bool compute_objective = true;

  /// Throws ParameterError on any violated range.
  void validate() const;
};

struct SolveResult {
  Matrix centers;
  /// Per-center mass: sum over inputs of membership term times input weight,
  /// taken from the pass that produced `centers`.
  std::vector<double> weights;
  std::size_t iterations = 0;
  bool converged = false;
  double final_shift = std::numeric_limits<double>::infinity();
  double objective = 0.0;  ///< 0 when compute_objective is off
  /// Point-to-center membership evaluations performed, including nested
  /// solves. A machine-independent measure of work.
  std::uint64_t evaluations = 0;
  /// Empty-cluster re-seeds performed.
  std::size_t reseeds = 0;
};

/// Called with the iteration number (0 = initial centers) and the centers
/// after that iteration.
using IterationObserver = std::function<void(std::size_t, const Matrix&)>;

/// Textbook fuzzy c-means that materializes the full c x n membership matrix.
/// Reference oracle for the accumulation-form solvers.
SolveResult fcm_naive(PointsView points, const Matrix& init, const FcmParams& params,
                      const IterationObserver& observer = {});

/// Single-pass accumulation form: no membership matrix, O(c * d) state.
SolveResult fcm_fast(PointsView points, const Matrix& init, const FcmParams& params);

/// Weighted variant of fcm_fast; each input scales its contribution to the
/// centers and to the returned masses.
SolveResult wfcm(PointsView points, std::span<const double> weights, const Matrix& init,
                 const FcmParams& params);

/// Block-progressive weighted clustering. Consecutive blocks of `block_size`
/// points are clustered with fcm_fast, each seeded by the previous block's
/// centers, and the running weighted center pool is merged back to c centers
/// with wfcm after every block. A trailing block shorter than c is folded into
/// the one before it.
SolveResult wfcmpb(PointsView points, const Matrix& init, const FcmParams& params,
                   std::size_t block_size);

/// Largest squared displacement between corresponding centers.
double max_center_shift(const Matrix& old_centers, const Matrix& new_centers);

/// max_center_shift(old, new) <= epsilon.
bool converged(const Matrix& old_centers, const Matrix& new_centers, double epsilon);

/// Picks `count` distinct rows uniformly at random (sorted by row index).
Matrix random_init(PointsView points, std::size_t count, std::uint64_t seed);

}  // namespace pfcm
