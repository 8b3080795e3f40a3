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

#include "pfcm/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "pfcm/error.hpp"
#include "pfcm/kernels.hpp"
#include "pfcm/numeric.hpp"

namespace pfcm {

void FcmParams::validate() const {
  if (c < 1) throw ParameterError("clusters must be >= 1");
  if (c_intermediate < c)
    throw ParameterError("intermediate clusters (" + std::to_string(c_intermediate) +
                         ") must be >= clusters (" + std::to_string(c) + ")");
  require_fuzzifier(m);
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw ParameterError("epsilon must be a finite value > 0");
  if (max_iterations < 1) throw ParameterError("max_iterations must be >= 1");
}

double max_center_shift(const Matrix& old_centers, const Matrix& new_centers) {
  if (old_centers.rows() != new_centers.rows() || old_centers.dim() != new_centers.dim())
    throw InvalidInput("center sets differ in shape (" +
                       std::to_string(old_centers.rows()) + "x" +
                       std::to_string(old_centers.dim()) + " vs " +
                       std::to_string(new_centers.rows()) + "x" +
                       std::to_string(new_centers.dim()) + ")");
  double shift = 0.0;
  for (std::size_t i = 0; i < old_centers.rows(); ++i)
    shift = std::max(shift, squared_euclidean(old_centers.row(i), new_centers.row(i)));
  return shift;
}

bool converged(const Matrix& old_centers, const Matrix& new_centers, double epsilon) {
  return max_center_shift(old_centers, new_centers) <= epsilon;
}

Matrix random_init(PointsView points, std::size_t count, std::uint64_t seed) {
  if (count > points.rows())
    throw InvalidInput("random_init: " + std::to_string(count) + " centers requested from " +
                       std::to_string(points.rows()) + " points");
  std::vector<std::size_t> index(points.rows());
  std::iota(index.begin(), index.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, index.size() - 1);
    std::swap(index[i], index[pick(rng)]);
  }
  std::sort(index.begin(), index.begin() + static_cast<std::ptrdiff_t>(count));
  Matrix out(0, points.dim());
  out.reserve_rows(count);
  for (std::size_t i = 0; i < count; ++i) out.append(points.row(index[i]));
  return out;
}

namespace {

void validate_problem(const char* solver, PointsView points, const Matrix& init,
                      const FcmParams& params) {
  params.validate();
  if (init.rows() != params.c)
    throw InvalidInput(std::string(solver) + ": init has " + std::to_string(init.rows()) +
                       " centers, expected " + std::to_string(params.c));
  if (points.rows() < params.c)
    throw InvalidInput(std::string(solver) + ": " + std::to_string(points.rows()) +
                       " points for " + std::to_string(params.c) + " clusters");
  if (init.dim() != points.dim())
    throw InvalidInput(std::string(solver) + ": center dimension " +
                       std::to_string(init.dim()) + " vs point dimension " +
                       std::to_string(points.dim()));
  require_finite(points, solver);
  require_finite(init, solver);
}

void validate_weights(const char* solver, PointsView points,
                      std::span<const double> weights) {
  if (weights.size() != points.rows())
    throw InvalidInput(std::string(solver) + ": " + std::to_string(weights.size()) +
                       " weights for " + std::to_string(points.rows()) + " points");
  for (std::size_t k = 0; k < weights.size(); ++k)
    if (!(weights[k] > 0.0) || !std::isfinite(weights[k]))
      throw InvalidInput(std::string(solver) + ": weight " + std::to_string(k) +
                         " is not a finite positive value");
}

/// Index of the point whose nearest center is farthest away (lowest index on
/// ties).
std::size_t farthest_point(PointsView points, const kernels::KernelTable& kern,
                           const std::vector<double>& cols, std::size_t c,
                           std::vector<double>& dist) {
  std::size_t best = 0;
  double best_dist = -1.0;
  for (std::size_t k = 0; k < points.rows(); ++k) {
    kern.squared_distances(points.row(k).data(), cols.data(), c, c, points.dim(),
                           dist.data());
    const double nearest = *std::min_element(dist.begin(), dist.begin() + c);
    if (nearest > best_dist) {
      best_dist = nearest;
      best = k;
    }
  }
  return best;
}

/// Shared accumulation loop behind fcm_fast and wfcm. `weights` empty means
/// unit weights.
SolveResult accumulate_solve(PointsView points, std::span<const double> weights,
                             const Matrix& init, const FcmParams& params) {
  const auto& kern = kernels::active();
  const std::size_t n = points.rows();
  const std::size_t c = init.rows();
  const std::size_t d = init.dim();
  const bool weighted = !weights.empty();

  SolveResult result;
  Matrix centers = init;
  std::vector<double> cols;
  std::vector<double> acc(c * d);
  std::vector<double> mass(c);
  std::vector<double> dist(c);
  std::vector<double> terms(c);
  std::vector<double> scale(c);

  while (result.iterations < params.max_iterations) {
    kernels::to_columns(centers, cols);
    for (std::size_t attempt = 0;; ++attempt) {
      std::fill(acc.begin(), acc.end(), 0.0);
      std::fill(mass.begin(), mass.end(), 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        const double* x = points.row(k).data();
        kern.squared_distances(x, cols.data(), c, c, d, dist.data());
        terms_from_squared_distances(dist, params.m, terms);
        const double w = weighted ? weights[k] : 1.0;
        for (std::size_t i = 0; i < c; ++i) {
          scale[i] = terms[i] * w;
          mass[i] += scale[i];
        }
        kern.scaled_accumulate(x, scale.data(), c, c, d, acc.data());
      }
      result.evaluations += static_cast<std::uint64_t>(n) * c;

      bool reseeded = false;
      if (attempt < c) {
        for (std::size_t i = 0; i < c; ++i) {
          if (mass[i] != 0.0) continue;
          const std::size_t far = farthest_point(points, kern, cols, c, dist);
          std::copy_n(points.row(far).data(), d, centers.row(i).data());
          kernels::to_columns(centers, cols);
          ++result.reseeds;
          reseeded = true;
        }
      }
      if (!reseeded) break;
    }

    Matrix next = centers;
    for (std::size_t i = 0; i < c; ++i) {
      if (mass[i] == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) next(i, j) = acc[j * c + i] / mass[i];
    }
    result.final_shift = max_center_shift(centers, next);
    centers = std::move(next);
    ++result.iterations;
    if (result.final_shift <= params.epsilon) break;
  }

  result.converged = result.final_shift <= params.epsilon;
  result.weights = std::move(mass);
  if (params.compute_objective) {
    result.objective = weighted ? fcm_objective(points, weights, centers, params.m)
                                : fcm_objective(points, centers, params.m);
  }
  result.centers = std::move(centers);
  return result;
}

}  // namespace

SolveResult fcm_naive(PointsView points, const Matrix& init, const FcmParams& params,
                      const IterationObserver& observer) {
  validate_problem("fcm_naive", points, init, params);
  const std::size_t n = points.rows();
  const std::size_t c = init.rows();
  const std::size_t d = init.dim();
  const double exponent = 1.0 / (params.m - 1.0);

  SolveResult result;
  Matrix centers = init;
  if (observer) observer(0, centers);

  // u[i][k], the full partition matrix.
  std::vector<std::vector<double>> u(c, std::vector<double>(n));
  std::vector<double> dist(c);

  auto update_memberships = [&] {
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t zeros = 0;
      for (std::size_t i = 0; i < c; ++i) {
        dist[i] = std::sqrt(squared_euclidean(points.row(k), centers.row(i)));
        if (dist[i] == 0.0) ++zeros;
      }
      for (std::size_t i = 0; i < c; ++i) {
        if (zeros > 0) {
          u[i][k] = dist[i] == 0.0 ? 1.0 / static_cast<double>(zeros) : 0.0;
          continue;
        }
        // u_ik = 1 / sum_j (d_ik / d_jk)^(2/(m-1))
        double s = 0.0;
        for (std::size_t j = 0; j < c; ++j) s += std::pow(dist[i] / dist[j], 2.0 * exponent);
        u[i][k] = 1.0 / s;
      }
    }
    result.evaluations += static_cast<std::uint64_t>(n) * c;
  };

  std::vector<double> mass(c);
  while (result.iterations < params.max_iterations) {
    for (std::size_t attempt = 0;; ++attempt) {
      update_memberships();
      bool reseeded = false;
      for (std::size_t i = 0; i < c; ++i) {
        mass[i] = 0.0;
        for (std::size_t k = 0; k < n; ++k) mass[i] += std::pow(u[i][k], params.m);
      }
      if (attempt < c) {
        for (std::size_t i = 0; i < c; ++i) {
          if (mass[i] != 0.0) continue;
          std::size_t far = 0;
          double far_dist = -1.0;
          for (std::size_t k = 0; k < n; ++k) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t v = 0; v < c; ++v)
              nearest = std::min(nearest, squared_euclidean(points.row(k), centers.row(v)));
            if (nearest > far_dist) {
              far_dist = nearest;
              far = k;
            }
          }
          std::copy_n(points.row(far).data(), d, centers.row(i).data());
          ++result.reseeds;
          reseeded = true;
        }
      }
      if (!reseeded) break;
    }

    Matrix next = centers;
    for (std::size_t i = 0; i < c; ++i) {
      if (mass[i] == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        double num = 0.0;
        for (std::size_t k = 0; k < n; ++k) num += std::pow(u[i][k], params.m) * points.row(k)[j];
        next(i, j) = num / mass[i];
      }
    }
    result.final_shift = max_center_shift(centers, next);
    centers = std::move(next);
    ++result.iterations;
    if (observer) observer(result.iterations, centers);
    if (result.final_shift <= params.epsilon) break;
  }

  result.converged = result.final_shift <= params.epsilon;
  result.weights = mass;
  if (params.compute_objective) result.objective = fcm_objective(points, centers, params.m);
  result.centers = std::move(centers);
  return result;
}

SolveResult fcm_fast(PointsView points, const Matrix& init, const FcmParams& params) {
  validate_problem("fcm_fast", points, init, params);
  return accumulate_solve(points, {}, init, params);
}

SolveResult wfcm(PointsView points, std::span<const double> weights, const Matrix& init,
                 const FcmParams& params) {
  validate_problem("wfcm", points, init, params);
  validate_weights("wfcm", points, weights);
  return accumulate_solve(points, weights, init, params);
}

SolveResult wfcmpb(PointsView points, const Matrix& init, const FcmParams& params,
                   std::size_t block_size) {
  validate_problem("wfcmpb", points, init, params);
  if (block_size < params.c)
    throw InvalidInput("wfcmpb: block size " + std::to_string(block_size) +
                       " is smaller than the cluster count " + std::to_string(params.c));

  const std::size_t n = points.rows();
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t begin = 0; begin < n; begin += block_size)
    blocks.emplace_back(begin, std::min(n, begin + block_size));
  if (blocks.size() > 1 && blocks.back().second - blocks.back().first < params.c) {
    blocks[blocks.size() - 2].second = n;
    blocks.pop_back();
  }

  FcmParams inner = params;
  inner.compute_objective = false;

  SolveResult result;
  Matrix seed = init;
  Matrix merged;
  std::vector<double> merged_weights;
  SolveResult last_merge;
  for (const auto& [begin, end] : blocks) {
    SolveResult block = accumulate_solve(points.slice(begin, end), {}, seed, inner);
    result.iterations += block.iterations;
    result.evaluations += block.evaluations;
    result.reseeds += block.reseeds;

    // Pool {V_final ∪ C_i} with weights {W_f ∪ W_i}; empty-mass entries carry
    // no information and wfcm requires positive weights.
    Matrix pool(0, points.dim());
    std::vector<double> pool_weights;
    auto add = [&](const Matrix& centers, const std::vector<double>& weights) {
      for (std::size_t i = 0; i < centers.rows(); ++i) {
        if (weights[i] > 0.0) {
          pool.append(centers.row(i));
          pool_weights.push_back(weights[i]);
        }
      }
    };
    add(merged, merged_weights);
    add(block.centers, block.weights);

    const Matrix& merge_init = merged.empty() ? block.centers : merged;
    if (pool.rows() < params.c) {
      // Only possible when a block left clusters without mass; keep the block
      // result as the running merge.
      merged = block.centers;
      merged_weights = block.weights;
    } else {
      last_merge = accumulate_solve(pool, pool_weights, merge_init, inner);
      result.iterations += last_merge.iterations;
      result.evaluations += last_merge.evaluations;
      result.reseeds += last_merge.reseeds;
      merged = last_merge.centers;
      merged_weights = last_merge.weights;
    }
    seed = std::move(block.centers);
  }

  result.centers = std::move(merged);
  result.weights = std::move(merged_weights);
  result.final_shift = last_merge.iterations > 0 ? last_merge.final_shift : 0.0;
  result.converged = result.final_shift <= params.epsilon;
  if (params.compute_objective)
    result.objective = fcm_objective(points, result.centers, params.m);
  return result;
}

}  // namespace pfcm
