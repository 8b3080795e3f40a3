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

#include <span>
#include <vector>

#include "pfcm/matrix.hpp"

// Formulas shared by every solver: distances, membership terms and the
// (weighted) fuzzy objective. All functions are pure.
namespace pfcm {

/// Sum of squared coordinate differences. Throws InvalidInput on a dimension
/// mismatch.
double squared_euclidean(std::span<const double> a, std::span<const double> b);

/// Throws ParameterError unless m > 1 and finite.
void require_fuzzifier(double m);

/// Membership terms u_i^m for one point given its squared distances to each
/// center.
///
/// Computes numerator_i = d_i^(1/(m-1)), denominator = sum_i 1/numerator_i and
/// term_i = (numerator_i * denominator)^(-m). The product is invariant to a
/// common rescaling of the distances, so numerators are taken relative to the
/// nearest center; this keeps the chain finite for any m close to 1.
///
/// If the point coincides with k >= 1 centers (squared distance exactly 0),
/// membership is split equally among them: term = (1/k)^m for those, 0 for
/// the rest.
///
/// `terms` must have the same size as `squared_distances`. m is not checked.
void terms_from_squared_distances(std::span<const double> squared_distances, double m,
                                  std::span<double> terms);

/// Membership terms of `x` against every center. Throws ParameterError for
/// m <= 1 and InvalidInput for an empty center set or dimension mismatch.
std::vector<double> membership_terms(std::span<const double> x, const Matrix& centers,
                                     double m);

/// Weighted objective sum_i sum_k w_k u_ik^m ||x_k - v_i||^2.
double fcm_objective(PointsView points, std::span<const double> weights,
                     const Matrix& centers, double m);

/// Unit-weight objective.
double fcm_objective(PointsView points, const Matrix& centers, double m);

}  // namespace pfcm
