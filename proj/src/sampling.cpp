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

#include "pfcm/sampling.hpp"

#include <cmath>
#include <sstream>

namespace pfcm {
namespace {

// ceil() of a ratio computed in floating point. Values like 9 / 0.09 land a
// few ulps above the exact integer; shave a relative 1e-12 so they do not
// round up to the next one.
std::size_t ceil_count(double value) {
  return static_cast<std::size_t>(std::ceil(value * (1.0 - 1e-12)));
}

}  // namespace

void VAlphaTable::set(double alpha, double v_alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  if (!(v_alpha > 0.0) || !std::isfinite(v_alpha))
    throw InvalidInput("v(alpha) must be a finite value > 0");
  entries_[alpha] = v_alpha;
}

bool VAlphaTable::contains(double alpha) const { return entries_.count(alpha) > 0; }

double VAlphaTable::lookup(double alpha) const {
  const auto it = entries_.find(alpha);
  if (it == entries_.end()) {
    std::ostringstream msg;
    msg << "unsupported alpha " << alpha << "; supported values: " << supported();
    throw UnsupportedParameter(msg.str());
  }
  return it->second;
}

std::string VAlphaTable::supported() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [alpha, v] : entries_) {
    if (!first) out << ", ";
    out << alpha;
    first = false;
  }
  return out.str();
}

std::size_t parker_hall_size(double v_alpha, std::size_t clusters, double relative_difference) {
  if (!(v_alpha > 0.0) || !std::isfinite(v_alpha))
    throw InvalidInput("parker_hall_size: v(alpha) must be > 0");
  if (clusters < 1) throw InvalidInput("parker_hall_size: clusters must be >= 1");
  if (!(relative_difference > 0.0 && relative_difference <= 1.0))
    throw InvalidInput("parker_hall_size: relative difference must lie in (0, 1]");
  const double c = static_cast<double>(clusters);
  return ceil_count(v_alpha * c * c / (relative_difference * relative_difference));
}

std::size_t thompson_size(double alpha, double d, const VAlphaTable& table) {
  const double v = table.lookup(alpha);
  if (!(d > 0.0 && d < 1.0)) throw InvalidInput("thompson_size: d must lie in (0, 1)");
  return ceil_count(v / (d * d));
}

std::size_t default_sample_size(std::size_t clusters, std::size_t record_count,
                                double v_alpha, double relative_difference) {
  const std::size_t lambda = parker_hall_size(v_alpha, clusters, relative_difference);
  return std::min(std::max(lambda, 10 * clusters), record_count);
}

Matrix reservoir_sample(PointsView points, std::size_t k, std::uint64_t seed) {
  if (points.rows() == 0) throw InvalidInput("reservoir: empty stream");
  Reservoir<std::size_t> reservoir(k, seed);
  for (std::size_t i = 0; i < points.rows(); ++i) reservoir.offer(i);
  Matrix out(0, points.dim());
  for (std::size_t i : std::move(reservoir).take()) out.append(points.row(i));
  return out;
}

}  // namespace pfcm
