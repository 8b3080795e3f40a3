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
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pfcm/matrix.hpp"

namespace pfcm {

enum class CategoricalEncoding { kOrdinal, kOneHot };

struct DatasetSchema {
  char delimiter = ',';
  bool has_header = false;
  /// Raw column holding the class label. Negative values count from the end
  /// (-1 is the last column).
  std::optional<long> label_column;
  /// Raw column indices holding tokens rather than numbers.
  std::set<std::size_t> categorical_columns;
  CategoricalEncoding encoding = CategoricalEncoding::kOrdinal;
};

/// One parsed line. `numeric` has one slot per feature column (categorical
/// slots hold 0 until encoded); `tokens` holds the raw categorical fields in
/// column order.
struct RawRecord {
  std::vector<double> numeric;
  std::vector<std::string> tokens;
  std::optional<std::string> label;
};

struct RawTable {
  std::vector<std::string> header;
  std::size_t column_count = 0;
  std::optional<std::size_t> label_column;    ///< resolved, non-negative
  std::vector<std::size_t> feature_columns;   ///< raw indices, label excluded
  std::vector<std::size_t> categorical_slots; ///< positions within feature_columns
  std::vector<RawRecord> records;
};

/// Parses delimited text: one record per non-empty line, whitespace trimmed
/// per field, decimal or scientific numerics. Throws ParseError with a
/// 1-based line and column, or InvalidInput for an empty source.
RawTable read_records(std::istream& source, const DatasetSchema& schema);

/// Token -> code mapping of one categorical column, codes in first-appearance
/// order.
struct CategoryDictionary {
  std::size_t column = 0;  ///< raw column index
  std::vector<std::string> tokens;

  /// Code of `token`, appending it when unseen.
  std::size_t encode(const std::string& token);
  std::optional<std::size_t> find(const std::string& token) const;
};

struct EncodedTable {
  Matrix features;
  std::vector<std::string> labels;  ///< empty when there is no label column
  std::vector<CategoryDictionary> dictionaries;
};

/// Replaces categorical tokens with numeric codes. Ordinal encoding keeps the
/// feature count; one-hot expands each categorical column into one indicator
/// per distinct token. Passing `dictionaries` from an earlier run reuses
/// their codes.
EncodedTable encode_categorical(const RawTable& table, const DatasetSchema& schema,
                                std::vector<CategoryDictionary> dictionaries = {});

struct FeatureRange {
  double min = 0.0;
  double max = 0.0;
};

/// Maps every feature to (x - min) / (max - min); constant features map to 0.
std::pair<Matrix, std::vector<FeatureRange>> normalize_minmax(const Matrix& records);

/// Applies ranges computed by normalize_minmax to other data.
Matrix apply_minmax(const Matrix& records, const std::vector<FeatureRange>& ranges);

struct PartitionPlan {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;  ///< [begin, end)
  std::size_t requested = 0;
  bool clamped = false;  ///< requested > record count

  std::size_t count() const noexcept { return ranges.size(); }
};

/// Balanced contiguous ranges; the first n mod P partitions hold one extra
/// record. P > n is clamped to n.
PartitionPlan plan_partitions(std::size_t record_count, std::size_t partition_count);

/// Everything needed to re-apply an ingestion to new data.
struct IngestState {
  DatasetSchema schema;
  std::vector<CategoryDictionary> dictionaries;
  std::optional<std::vector<FeatureRange>> ranges;  ///< present when normalized
  std::size_t feature_count = 0;
};

struct Dataset {
  Matrix features;
  std::vector<std::string> labels;
  IngestState state;
};

/// read_records -> encode_categorical -> optional normalize_minmax.
Dataset load_dataset(std::istream& source, const DatasetSchema& schema, bool normalize);
Dataset load_dataset_file(const std::string& path, const DatasetSchema& schema,
                          bool normalize);

/// Ingests new data with the dictionaries and ranges of an earlier run.
Dataset apply_ingest(std::istream& source, const IngestState& state);

nlohmann::json to_json(const IngestState& state);
IngestState ingest_state_from_json(const nlohmann::json& j);

}  // namespace pfcm
