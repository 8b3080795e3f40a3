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

#include "pfcm/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "pfcm/error.hpp"

namespace pfcm {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

std::optional<double> parse_number(std::string_view field) {
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
  return value;
}

}  // namespace

RawTable read_records(std::istream& source, const DatasetSchema& schema) {
  if (schema.delimiter == '\0') throw InvalidInput("schema: delimiter must be non-empty");

  RawTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = schema.has_header;
  std::vector<bool> is_categorical;

  auto resolve_layout = [&](std::size_t columns) {
    table.column_count = columns;
    if (schema.label_column) {
      const long raw = *schema.label_column;
      const long idx = raw < 0 ? static_cast<long>(columns) + raw : raw;
      if (idx < 0 || idx >= static_cast<long>(columns))
        throw InvalidInput("schema: label column " + std::to_string(raw) +
                           " is outside the " + std::to_string(columns) + " columns");
      table.label_column = static_cast<std::size_t>(idx);
      if (schema.categorical_columns.count(*table.label_column))
        throw InvalidInput("schema: label column " + std::to_string(idx) +
                           " is also declared categorical");
    }
    for (std::size_t col : schema.categorical_columns)
      if (col >= columns)
        throw InvalidInput("schema: categorical column " + std::to_string(col) +
                           " is outside the " + std::to_string(columns) + " columns");
    is_categorical.assign(columns, false);
    for (std::size_t col = 0; col < columns; ++col) {
      if (table.label_column && col == *table.label_column) continue;
      if (schema.categorical_columns.count(col)) {
        is_categorical[col] = true;
        table.categorical_slots.push_back(table.feature_columns.size());
      }
      table.feature_columns.push_back(col);
    }
    if (table.feature_columns.empty())
      throw InvalidInput("schema: no feature columns remain after removing the label");
  };

  while (std::getline(source, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, schema.delimiter);
    if (table.column_count == 0) resolve_layout(fields.size());
    if (header_pending) {
      header_pending = false;
      for (auto f : fields) table.header.emplace_back(f);
      if (fields.size() != table.column_count)
        throw ParseError("header has " + std::to_string(fields.size()) + " fields", line_no,
                         fields.size());
      continue;
    }
    if (fields.size() != table.column_count) {
      throw ParseError("expected " + std::to_string(table.column_count) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no, std::min(fields.size(), table.column_count) + 1);
    }

    RawRecord record;
    record.numeric.reserve(table.feature_columns.size());
    for (std::size_t col = 0; col < fields.size(); ++col) {
      if (table.label_column && col == *table.label_column) {
        record.label = std::string(fields[col]);
      } else if (is_categorical[col]) {
        record.tokens.emplace_back(fields[col]);
        record.numeric.push_back(0.0);
      } else {
        const auto value = parse_number(fields[col]);
        if (!value)
          throw ParseError("cannot parse '" + std::string(fields[col]) + "' as a number",
                           line_no, col + 1);
        if (!std::isfinite(*value))
          throw ParseError("non-finite value '" + std::string(fields[col]) + "'", line_no,
                           col + 1);
        record.numeric.push_back(*value);
      }
    }
    table.records.push_back(std::move(record));
  }

  if (table.records.empty()) throw InvalidInput("input contains no records");
  return table;
}

std::size_t CategoryDictionary::encode(const std::string& token) {
  if (const auto code = find(token)) return *code;
  tokens.push_back(token);
  return tokens.size() - 1;
}

std::optional<std::size_t> CategoryDictionary::find(const std::string& token) const {
  const auto it = std::find(tokens.begin(), tokens.end(), token);
  if (it == tokens.end()) return std::nullopt;
  return static_cast<std::size_t>(it - tokens.begin());
}

EncodedTable encode_categorical(const RawTable& table, const DatasetSchema& schema,
                                std::vector<CategoryDictionary> dictionaries) {
  const std::size_t categorical = table.categorical_slots.size();
  if (dictionaries.empty()) {
    for (std::size_t slot : table.categorical_slots)
      dictionaries.push_back({table.feature_columns[slot], {}});
  }
  if (dictionaries.size() != categorical)
    throw InvalidInput("encode_categorical: " + std::to_string(dictionaries.size()) +
                       " dictionaries for " + std::to_string(categorical) +
                       " categorical columns");

  // Codes first, so one-hot widths are known before building rows.
  std::vector<std::vector<std::size_t>> codes(table.records.size(),
                                              std::vector<std::size_t>(categorical));
  for (std::size_t r = 0; r < table.records.size(); ++r)
    for (std::size_t c = 0; c < categorical; ++c)
      codes[r][c] = dictionaries[c].encode(table.records[r].tokens[c]);

  EncodedTable out;
  const bool one_hot = schema.encoding == CategoricalEncoding::kOneHot;
  std::size_t width = table.feature_columns.size();
  if (one_hot)
    for (const auto& dict : dictionaries) width += dict.tokens.size() - 1;

  out.features = Matrix(0, width);
  out.features.reserve_rows(table.records.size());
  std::vector<double> row(width);
  for (std::size_t r = 0; r < table.records.size(); ++r) {
    const auto& rec = table.records[r];
    std::size_t pos = 0;
    std::size_t next_cat = 0;
    for (std::size_t slot = 0; slot < rec.numeric.size(); ++slot) {
      const bool is_cat = next_cat < categorical && table.categorical_slots[next_cat] == slot;
      if (!is_cat) {
        row[pos++] = rec.numeric[slot];
        continue;
      }
      const std::size_t code = codes[r][next_cat];
      if (one_hot) {
        const std::size_t k = dictionaries[next_cat].tokens.size();
        for (std::size_t t = 0; t < k; ++t) row[pos++] = t == code ? 1.0 : 0.0;
      } else {
        row[pos++] = static_cast<double>(code);
      }
      ++next_cat;
    }
    out.features.append(row);
    if (rec.label) out.labels.push_back(*rec.label);
  }
  out.dictionaries = std::move(dictionaries);
  return out;
}

std::pair<Matrix, std::vector<FeatureRange>> normalize_minmax(const Matrix& records) {
  if (records.rows() == 0) throw InvalidInput("normalize_minmax: no records");
  require_finite(records, "normalize_minmax");
  const std::size_t d = records.dim();
  std::vector<FeatureRange> ranges(d);
  for (std::size_t j = 0; j < d; ++j) ranges[j] = {records(0, j), records(0, j)};
  for (std::size_t i = 1; i < records.rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      ranges[j].min = std::min(ranges[j].min, records(i, j));
      ranges[j].max = std::max(ranges[j].max, records(i, j));
    }
  }
  return {apply_minmax(records, ranges), ranges};
}

Matrix apply_minmax(const Matrix& records, const std::vector<FeatureRange>& ranges) {
  if (ranges.size() != records.dim())
    throw InvalidInput("apply_minmax: " + std::to_string(ranges.size()) + " ranges for " +
                       std::to_string(records.dim()) + " features");
  require_finite(records, "apply_minmax");
  Matrix out = records;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.dim(); ++j) {
      const double span = ranges[j].max - ranges[j].min;
      out(i, j) = span > 0.0 ? (records(i, j) - ranges[j].min) / span : 0.0;
    }
  }
  return out;
}

PartitionPlan plan_partitions(std::size_t record_count, std::size_t partition_count) {
  if (record_count < 1) throw InvalidInput("plan_partitions: no records");
  if (partition_count < 1) throw InvalidInput("plan_partitions: partition count must be >= 1");
  PartitionPlan plan;
  plan.requested = partition_count;
  if (partition_count > record_count) {
    plan.clamped = true;
    partition_count = record_count;
  }
  const std::size_t base = record_count / partition_count;
  const std::size_t extra = record_count % partition_count;
  std::size_t begin = 0;
  for (std::size_t p = 0; p < partition_count; ++p) {
    const std::size_t size = base + (p < extra ? 1 : 0);
    plan.ranges.emplace_back(begin, begin + size);
    begin += size;
  }
  return plan;
}

Dataset load_dataset(std::istream& source, const DatasetSchema& schema, bool normalize) {
  const RawTable raw = read_records(source, schema);
  EncodedTable encoded = encode_categorical(raw, schema);
  Dataset ds;
  ds.labels = std::move(encoded.labels);
  ds.state.schema = schema;
  ds.state.dictionaries = std::move(encoded.dictionaries);
  ds.state.feature_count = encoded.features.dim();
  if (normalize) {
    auto [features, ranges] = normalize_minmax(encoded.features);
    ds.features = std::move(features);
    ds.state.ranges = std::move(ranges);
  } else {
    ds.features = std::move(encoded.features);
  }
  return ds;
}

Dataset load_dataset_file(const std::string& path, const DatasetSchema& schema,
                          bool normalize) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open input file '" + path + "'");
  return load_dataset(in, schema, normalize);
}

Dataset apply_ingest(std::istream& source, const IngestState& state) {
  const RawTable raw = read_records(source, state.schema);
  EncodedTable encoded = encode_categorical(raw, state.schema, state.dictionaries);
  if (encoded.features.dim() != state.feature_count)
    throw InvalidInput("data has " + std::to_string(encoded.features.dim()) +
                       " features after encoding, model expects " +
                       std::to_string(state.feature_count));
  Dataset ds;
  ds.labels = std::move(encoded.labels);
  ds.state = state;
  ds.state.dictionaries = std::move(encoded.dictionaries);
  ds.features = state.ranges ? apply_minmax(encoded.features, *state.ranges)
                             : std::move(encoded.features);
  return ds;
}

nlohmann::json to_json(const IngestState& state) {
  nlohmann::json j;
  j["delimiter"] = std::string(1, state.schema.delimiter);
  j["header"] = state.schema.has_header;
  j["label_column"] = state.schema.label_column ? nlohmann::json(*state.schema.label_column)
                                                : nlohmann::json(nullptr);
  j["categorical_columns"] = state.schema.categorical_columns;
  j["encoding"] =
      state.schema.encoding == CategoricalEncoding::kOneHot ? "one-hot" : "ordinal";
  j["feature_count"] = state.feature_count;
  auto& dicts = j["dictionaries"] = nlohmann::json::array();
  for (const auto& d : state.dictionaries)
    dicts.push_back({{"column", d.column}, {"tokens", d.tokens}});
  if (state.ranges) {
    auto& ranges = j["normalization"] = nlohmann::json::array();
    for (const auto& r : *state.ranges) ranges.push_back({{"min", r.min}, {"max", r.max}});
  } else {
    j["normalization"] = nullptr;
  }
  return j;
}

IngestState ingest_state_from_json(const nlohmann::json& j) {
  IngestState state;
  const auto delim = j.at("delimiter").get<std::string>();
  if (delim.size() != 1) throw InvalidInput("ingest state: delimiter must be one character");
  state.schema.delimiter = delim[0];
  state.schema.has_header = j.at("header").get<bool>();
  if (!j.at("label_column").is_null())
    state.schema.label_column = j.at("label_column").get<long>();
  state.schema.categorical_columns = j.at("categorical_columns").get<std::set<std::size_t>>();
  state.schema.encoding = j.at("encoding").get<std::string>() == "one-hot"
                              ? CategoricalEncoding::kOneHot
                              : CategoricalEncoding::kOrdinal;
  state.feature_count = j.at("feature_count").get<std::size_t>();
  for (const auto& d : j.at("dictionaries"))
    state.dictionaries.push_back(
        {d.at("column").get<std::size_t>(), d.at("tokens").get<std::vector<std::string>>()});
  if (!j.at("normalization").is_null()) {
    std::vector<FeatureRange> ranges;
    for (const auto& r : j.at("normalization"))
      ranges.push_back({r.at("min").get<double>(), r.at("max").get<double>()});
    state.ranges = std::move(ranges);
  }
  return state;
}

}  // namespace pfcm
