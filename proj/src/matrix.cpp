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

#include "pfcm/matrix.hpp"

#include <cmath>
#include <string>

#include "pfcm/error.hpp"

namespace pfcm {

PointsView::PointsView(std::span<const double> data, std::size_t dim)
    : data_(data), dim_(dim) {
  if (dim == 0 && !data.empty()) throw InvalidInput("points: dimension 0");
  if (dim != 0 && data.size() % dim != 0)
    throw InvalidInput("points: buffer size is not a multiple of the dimension");
}

PointsView PointsView::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > rows()) throw InvalidInput("points: slice out of range");
  return {data_.subspan(begin * dim_, (end - begin) * dim_), dim_};
}

Matrix::Matrix(std::size_t rows, std::size_t dim, double fill)
    : data_(rows * dim, fill), dim_(dim) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  for (const auto& r : rows) append(std::span<const double>(r.begin(), r.size()));
}

Matrix::Matrix(PointsView view)
    : data_(view.data().begin(), view.data().end()), dim_(view.dim()) {}

Matrix Matrix::from_rows(const std::vector<FeatureVector>& rows) {
  Matrix m;
  for (const auto& r : rows) m.append(r);
  return m;
}

void Matrix::append(std::span<const double> row) {
  if (dim_ == 0) {
    if (row.empty()) throw InvalidInput("matrix: cannot append an empty row");
    dim_ = row.size();
  } else if (row.size() != dim_) {
    throw InvalidInput("matrix: row of dimension " + std::to_string(row.size()) +
                       " appended to matrix of dimension " + std::to_string(dim_));
  }
  data_.insert(data_.end(), row.begin(), row.end());
}

std::vector<FeatureVector> Matrix::to_rows() const {
  std::vector<FeatureVector> out;
  out.reserve(rows());
  for (std::size_t i = 0; i < rows(); ++i) out.emplace_back(row(i).begin(), row(i).end());
  return out;
}

void require_finite(PointsView points, const char* what) {
  const auto data = points.data();
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (!std::isfinite(data[k])) {
      throw InvalidInput(std::string(what) + ": non-finite value at row " +
                         std::to_string(k / points.dim()) + ", coordinate " +
                         std::to_string(k % points.dim()));
    }
  }
}

}  // namespace pfcm
