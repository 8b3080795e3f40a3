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

#include "pfcm/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pfcm/error.hpp"

namespace pfcm {

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidInput("squared_euclidean: dimension mismatch (" +
                       std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                       ")");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    acc = acc + diff * diff;
  }
  return acc;
}

void require_fuzzifier(double m) {
  if (!(m > 1.0) || !std::isfinite(m)) {
    throw ParameterError("fuzzifier m must be a finite value > 1 (got " +
                         std::to_string(m) + "); the exponent 2/(m-1) is undefined");
  }
}

void terms_from_squared_distances(std::span<const double> squared_distances, double m,
                                  std::span<double> terms) {
  const std::size_t c = squared_distances.size();
  std::size_t coincident = 0;
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c; ++i) {
    if (squared_distances[i] == 0.0) ++coincident;
    nearest = std::min(nearest, squared_distances[i]);
  }

  if (coincident > 0) {
    const double share = std::pow(1.0 / static_cast<double>(coincident), m);
    for (std::size_t i = 0; i < c; ++i)
      terms[i] = squared_distances[i] == 0.0 ? share : 0.0;
    return;
  }

  // ||x - v||^(2/(m-1)) == (||x - v||^2)^(1/(m-1)), scaled by the nearest one.
  const bool quadratic = m == 2.0;
  const double exponent = 1.0 / (m - 1.0);
  double denominator = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    const double ratio = squared_distances[i] / nearest;
    terms[i] = quadratic ? ratio : std::pow(ratio, exponent);
    denominator += 1.0 / terms[i];
  }
  for (std::size_t i = 0; i < c; ++i) {
    const double product = terms[i] * denominator;
    terms[i] = quadratic ? 1.0 / (product * product) : std::pow(product, -m);
  }
}

std::vector<double> membership_terms(std::span<const double> x, const Matrix& centers,
                                     double m) {
  require_fuzzifier(m);
  if (centers.rows() == 0) throw InvalidInput("membership_terms: empty center set");
  std::vector<double> dist(centers.rows());
  for (std::size_t i = 0; i < centers.rows(); ++i)
    dist[i] = squared_euclidean(x, centers.row(i));
  std::vector<double> terms(centers.rows());
  terms_from_squared_distances(dist, m, terms);
  return terms;
}

double fcm_objective(PointsView points, std::span<const double> weights,
                     const Matrix& centers, double m) {
  require_fuzzifier(m);
  if (weights.size() != points.rows()) {
    throw InvalidInput("fcm_objective: " + std::to_string(weights.size()) +
                       " weights for " + std::to_string(points.rows()) + " points");
  }
  if (centers.rows() == 0) throw InvalidInput("fcm_objective: empty center set");
  if (points.rows() > 0 && centers.dim() != points.dim()) {
    throw InvalidInput("fcm_objective: center dimension " +
                       std::to_string(centers.dim()) + " vs point dimension " +
                       std::to_string(points.dim()));
  }
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] > 0.0) || !std::isfinite(weights[k]))
      throw InvalidInput("fcm_objective: weight " + std::to_string(k) +
                         " is not a finite positive value");
  }

  const std::size_t c = centers.rows();
  std::vector<double> dist(c);
  std::vector<double> terms(c);
  double total = 0.0;
  for (std::size_t k = 0; k < points.rows(); ++k) {
    for (std::size_t i = 0; i < c; ++i)
      dist[i] = squared_euclidean(points.row(k), centers.row(i));
    terms_from_squared_distances(dist, m, terms);
    double point_sum = 0.0;
    for (std::size_t i = 0; i < c; ++i) point_sum += terms[i] * dist[i];
    total += weights[k] * point_sum;
  }
  return total;
}

double fcm_objective(PointsView points, const Matrix& centers, double m) {
  const std::vector<double> unit(points.rows(), 1.0);
  return fcm_objective(points, unit, centers, m);
}

}  // namespace pfcm
