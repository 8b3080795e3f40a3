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

#include "pfcm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "pfcm/error.hpp"
#include "pfcm/kernels.hpp"
#include "pfcm/sampling.hpp"

namespace pfcm {

std::vector<std::size_t> assign(PointsView points, const Matrix& centers) {
  if (centers.rows() == 0) throw InvalidInput("assign: empty center set");
  if (points.rows() > 0 && points.dim() != centers.dim())
    throw InvalidInput("assign: point dimension " + std::to_string(points.dim()) +
                       " vs center dimension " + std::to_string(centers.dim()));
  const auto& kern = kernels::active();
  const std::size_t c = centers.rows();
  const auto cols = kernels::to_columns(centers);
  std::vector<double> dist(c);
  std::vector<std::size_t> out(points.rows());
  for (std::size_t k = 0; k < points.rows(); ++k) {
    kern.squared_distances(points.row(k).data(), cols.data(), c, c, points.dim(), dist.data());
    out[k] = static_cast<std::size_t>(std::min_element(dist.begin(), dist.end()) - dist.begin());
  }
  return out;
}

namespace {

/// Max-weight assignment of every row to a distinct column (rows <= cols).
/// Shortest augmenting path Hungarian method on negated counts.
std::vector<std::size_t> hungarian_max(const std::vector<std::vector<double>>& weight) {
  const std::size_t n = weight.size();
  const std::size_t m = weight.empty() ? 0 : weight[0].size();
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; p[j] = row matched to column j.
  std::vector<double> u(n + 1), v(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = -weight[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

AccuracyResult confusion_accuracy(const std::vector<std::size_t>& assignments,
                                  const std::vector<std::string>& labels) {
  if (assignments.empty()) throw InvalidInput("confusion_accuracy: no records");
  if (assignments.size() != labels.size())
    throw InvalidInput("confusion_accuracy: " + std::to_string(assignments.size()) +
                       " assignments for " + std::to_string(labels.size()) + " labels");

  // Labels indexed in sorted order, so results do not depend on record order.
  std::vector<std::string> names(labels);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  const std::size_t clusters = *std::max_element(assignments.begin(), assignments.end()) + 1;

  std::vector<std::vector<double>> table(clusters, std::vector<double>(names.size(), 0.0));
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const auto label = static_cast<std::size_t>(
        std::lower_bound(names.begin(), names.end(), labels[k]) - names.begin());
    table[assignments[k]][label] += 1.0;
  }

  std::vector<std::size_t> choice(clusters);
  if (clusters <= names.size()) {
    choice = hungarian_max(table);
  } else {
    for (std::size_t i = 0; i < clusters; ++i)
      choice[i] = static_cast<std::size_t>(
          std::max_element(table[i].begin(), table[i].end()) - table[i].begin());
  }

  AccuracyResult result;
  for (std::size_t i = 0; i < clusters; ++i) {
    result.matched += static_cast<std::size_t>(table[i][choice[i]]);
    result.mapping.push_back(names[choice[i]]);
  }
  result.accuracy = static_cast<double>(result.matched) / static_cast<double>(labels.size());
  return result;
}

SilhouetteResult silhouette_width(PointsView points, const std::vector<std::size_t>& assignments,
                                  std::size_t sample_cap, std::uint64_t seed) {
  if (assignments.size() != points.rows())
    throw InvalidInput("silhouette_width: " + std::to_string(assignments.size()) +
                       " assignments for " + std::to_string(points.rows()) + " points");
  if (sample_cap < 2) throw InvalidInput("silhouette_width: sample cap must be >= 2");
  if (points.rows() < 2) throw UndefinedMetric("silhouette_width: needs at least 2 points");

  std::vector<std::size_t> chosen;
  if (points.rows() > sample_cap) {
    Reservoir<std::size_t> reservoir(sample_cap, seed);
    for (std::size_t i = 0; i < points.rows(); ++i) reservoir.offer(i);
    chosen = std::move(reservoir).take();
  } else {
    chosen.resize(points.rows());
    for (std::size_t i = 0; i < chosen.size(); ++i) chosen[i] = i;
  }

  const std::size_t s = chosen.size();
  const std::size_t d = points.dim();
  const std::size_t clusters = *std::max_element(assignments.begin(), assignments.end()) + 1;
  std::vector<std::size_t> label(s);
  std::vector<std::size_t> size(clusters, 0);
  Matrix sample(0, d);
  sample.reserve_rows(s);
  for (std::size_t i = 0; i < s; ++i) {
    sample.append(points.row(chosen[i]));
    label[i] = assignments[chosen[i]];
    ++size[label[i]];
  }
  if (std::count_if(size.begin(), size.end(), [](std::size_t n) { return n > 0; }) < 2)
    throw UndefinedMetric("silhouette_width: all points fall in a single cluster");

  const auto& kern = kernels::active();
  const auto cols = kernels::to_columns(sample);
  std::vector<double> dist(s);
  std::vector<double> per_cluster(clusters);
  double total = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    if (size[label[i]] == 1) continue;  // singleton: s = 0
    kern.squared_distances(sample.row(i).data(), cols.data(), s, s, d, dist.data());
    std::fill(per_cluster.begin(), per_cluster.end(), 0.0);
    for (std::size_t k = 0; k < s; ++k) per_cluster[label[k]] += std::sqrt(dist[k]);
    const double a = per_cluster[label[i]] / static_cast<double>(size[label[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < clusters; ++c)
      if (c != label[i] && size[c] > 0)
        b = std::min(b, per_cluster[c] / static_cast<double>(size[c]));
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return {total / static_cast<double>(s), s};
}

double relative_speedup(double t_baseline, double t_candidate) {
  if (!(t_baseline > 0.0) || !(t_candidate > 0.0))
    throw InvalidInput("relative_speedup: times must be > 0");
  return t_baseline / t_candidate;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json j;
  j["records"] = report.records;
  j["accuracy"] = report.accuracy;
  nlohmann::json mapping = nlohmann::json::object();
  for (std::size_t i = 0; i < report.mapping.size(); ++i)
    mapping[std::to_string(i)] = report.mapping[i];
  j["mapping"] = mapping;
  j["silhouette"] = {{"value", report.silhouette}, {"sample_size", report.silhouette_sample}};
  j["runtimes_ms"] = report.runtimes_ms;
  j["speedup"] = report.speedup ? nlohmann::json(*report.speedup) : nlohmann::json(nullptr);
  return j;
}

std::string render_table(const EvalReport& report) {
  std::vector<std::pair<std::string, std::string>> rows;
  auto fmt = [](double v, int precision) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << v;
    return s.str();
  };
  rows.emplace_back("records", std::to_string(report.records));
  rows.emplace_back("accuracy", fmt(report.accuracy * 100.0, 2) + " %");
  for (std::size_t i = 0; i < report.mapping.size(); ++i)
    rows.emplace_back("cluster " + std::to_string(i), "-> " + report.mapping[i]);
  rows.emplace_back("silhouette",
                    fmt(report.silhouette, 4) + " (n=" + std::to_string(report.silhouette_sample) + ")");
  for (const auto& [name, ms] : report.runtimes_ms) rows.emplace_back(name + " ms", fmt(ms, 1));
  if (report.speedup) rows.emplace_back("speedup", fmt(*report.speedup, 2) + "x");

  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  std::ostringstream out;
  for (const auto& [key, value] : rows)
    out << std::left << std::setw(static_cast<int>(width) + 2) << key << value << '\n';
  return out.str();
}

}  // namespace pfcm
