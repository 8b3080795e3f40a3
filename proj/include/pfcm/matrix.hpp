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
#include <initializer_list>
#include <span>
#include <vector>

namespace pfcm {

/// One data record or one center: a dense real vector.
using FeatureVector = std::vector<double>;

/// Non-owning view over row-major points of a fixed dimension.
class PointsView {
 public:
  PointsView() = default;
  PointsView(std::span<const double> data, std::size_t dim);

  std::size_t rows() const noexcept { return dim_ ? data_.size() / dim_ : 0; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return data_.subspan(i * dim_, dim_);
  }
  std::span<const double> data() const noexcept { return data_; }

  /// Rows [begin, end).
  PointsView slice(std::size_t begin, std::size_t end) const;

 private:
  std::span<const double> data_;
  std::size_t dim_ = 0;
};

/// Owning row-major matrix. Used for point sets and center sets alike.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t dim, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);
  explicit Matrix(PointsView view);

  static Matrix from_rows(const std::vector<FeatureVector>& rows);

  std::size_t rows() const noexcept { return dim_ ? data_.size() / dim_ : 0; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }

  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * dim_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  /// Appends a row; the first append on an empty dimensionless matrix fixes
  /// the dimension.
  void append(std::span<const double> row);
  void reserve_rows(std::size_t n) { data_.reserve(n * dim_); }

  PointsView view() const noexcept { return {data_, dim_}; }
  operator PointsView() const noexcept { return view(); }  // NOLINT

  std::vector<FeatureVector> to_rows() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::vector<double> data_;
  std::size_t dim_ = 0;
};

/// Throws InvalidInput unless every coordinate is finite.
void require_finite(PointsView points, const char* what);

}  // namespace pfcm
