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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pfcm/matrix.hpp"

namespace pfcm {

/// Hardens fuzzy output: each point goes to its nearest center, which is the
/// argmax-membership center for any m > 1. Ties go to the lowest index.
std::vector<std::size_t> assign(PointsView points, const Matrix& centers);

struct AccuracyResult {
  double accuracy = 0.0;
  std::vector<std::string> mapping;  ///< mapping[cluster] = label
  std::size_t matched = 0;
};

/// Confusion-matrix accuracy under the best cluster-to-label mapping. With
/// no more clusters than labels the mapping is injective and found by the
/// Hungarian method; with more clusters, labels repeat and each cluster
/// takes its majority label. Both are exact.
AccuracyResult confusion_accuracy(const std::vector<std::size_t>& assignments,
                                  const std::vector<std::string>& labels);

struct SilhouetteResult {
  double value = 0.0;
  std::size_t sample_size = 0;
};

inline constexpr std::size_t kDefaultSilhouetteCap = 4000;

/// Mean silhouette width (Euclidean). Above `sample_cap` points a seeded
/// uniform sample is scored against itself. Singleton clusters score 0.
/// Throws UndefinedMetric with fewer than two non-empty clusters.
SilhouetteResult silhouette_width(PointsView points,
                                  const std::vector<std::size_t>& assignments,
                                  std::size_t sample_cap = kDefaultSilhouetteCap,
                                  std::uint64_t seed = 0);

/// t_baseline / t_candidate.
double relative_speedup(double t_baseline, double t_candidate);

struct EvalReport {
  std::size_t records = 0;
  double accuracy = 0.0;
  std::vector<std::string> mapping;
  double silhouette = 0.0;
  std::size_t silhouette_sample = 0;
  std::map<std::string, double> runtimes_ms;
  std::optional<double> speedup;
};

nlohmann::json to_json(const EvalReport& report);
/// Aligned two-column table for terminals.
std::string render_table(const EvalReport& report);

}  // namespace pfcm
