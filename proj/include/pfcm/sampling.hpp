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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <ranges>
#include <string>
#include <vector>

#include "pfcm/error.hpp"
#include "pfcm/matrix.hpp"

namespace pfcm {

/// Tabulated coefficients v(alpha) for the sample-size formulas. Ships with
/// the single pair alpha = 0.05 -> 1.27359; more can be added from a config
/// file.
class VAlphaTable {
 public:
  VAlphaTable() = default;

  void set(double alpha, double v_alpha);
  /// Throws UnsupportedParameter naming the supported values.
  double lookup(double alpha) const;
  bool contains(double alpha) const;
  std::string supported() const;

  static constexpr double kDefaultAlpha = 0.05;
  static constexpr double kDefaultV = 1.27359;

 private:
  std::map<double, double> entries_{{kDefaultAlpha, kDefaultV}};
};

/// ceil(v_alpha * clusters^2 / relative_difference^2).
std::size_t parker_hall_size(double v_alpha, std::size_t clusters, double relative_difference);

/// ceil(v(alpha) / d^2), with v(alpha) looked up in `table`.
std::size_t thompson_size(double alpha, double d, const VAlphaTable& table = {});

/// Driver sample size when none is configured: parker_hall_size(v, c, r)
/// clamped to [10 c, n].
std::size_t default_sample_size(std::size_t clusters, std::size_t record_count,
                                double v_alpha = VAlphaTable::kDefaultV,
                                double relative_difference = 0.10);

/// One-pass uniform sampling without replacement (Algorithm R) with O(k)
/// memory. Retained items are returned in stream order.
template <class T>
class Reservoir {
 public:
  Reservoir(std::size_t k, std::uint64_t seed) : k_(k), rng_(seed) {
    if (k == 0) throw InvalidInput("reservoir: sample size must be >= 1");
    slots_.reserve(k);
  }

  void offer(T item) {
    if (slots_.size() < k_) {
      slots_.push_back({seen_, std::move(item)});
    } else {
      std::uniform_int_distribution<std::uint64_t> pick(0, seen_);
      const std::uint64_t j = pick(rng_);
      if (j < k_) slots_[j] = {seen_, std::move(item)};
    }
    ++seen_;
  }

  std::uint64_t seen() const noexcept { return seen_; }

  /// Sampled stream positions, ascending.
  std::vector<std::uint64_t> positions() const {
    std::vector<std::uint64_t> out;
    for (const auto& s : slots_) out.push_back(s.position);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<T> take() && {
    if (seen_ == 0) throw InvalidInput("reservoir: empty stream");
    std::sort(slots_.begin(), slots_.end(),
              [](const Slot& a, const Slot& b) { return a.position < b.position; });
    std::vector<T> out;
    out.reserve(slots_.size());
    for (auto& s : slots_) out.push_back(std::move(s.item));
    return out;
  }

 private:
  struct Slot {
    std::uint64_t position;
    T item;
  };

  std::size_t k_;
  std::mt19937_64 rng_;
  std::uint64_t seen_ = 0;
  std::vector<Slot> slots_;
};

/// Samples min(k, n) records from any input range of records.
template <std::ranges::input_range Range>
auto reservoir_sample(Range&& records, std::size_t k, std::uint64_t seed) {
  using Item = std::ranges::range_value_t<Range>;
  Reservoir<Item> reservoir(k, seed);
  for (auto&& r : records) reservoir.offer(r);
  return std::move(reservoir).take();
}

/// Samples rows of an in-memory point set.
Matrix reservoir_sample(PointsView points, std::size_t k, std::uint64_t seed);

}  // namespace pfcm
