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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "pfcm/cli.hpp"
#include "pfcm/error.hpp"

namespace pfcm::cli {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  throw InvalidInput("setting '" + key + "': cannot use '" + value + "' (expected " +
                     expected + ")");
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const std::string v = trim(value);
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    bad_value(key, value, "a number");
  return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& value) {
  Int out = 0;
  const std::string v = trim(value);
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    bad_value(key, value, "an integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  std::string v = trim(value);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, value, "true or false");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::size_t RunConfig::effective_parallelism() const {
  if (parallelism > 0) return parallelism;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::size_t RunConfig::effective_intermediate() const {
  return intermediate_clusters.value_or(clusters);
}

void apply_setting(RunConfig& c, const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  if (key == "input") {
    c.input = trim(value);
  } else if (key == "output") {
    c.output = trim(value);
  } else if (key == "model") {
    c.model = trim(value);
  } else if (key == "delimiter") {
    std::string v = value == "\\t" || value == "tab" ? "\t" : value;
    if (v.size() != 1) bad_value(key, value, "a single character");
    c.delimiter = v[0];
  } else if (key == "header") {
    c.header = to_bool(key, value);
  } else if (key == "label-column") {
    const std::string v = trim(value);
    if (v.empty() || v == "none") c.label_column.reset();
    else if (v == "last") c.label_column = -1;
    else c.label_column = to_int<long>(key, v);
  } else if (key == "categorical") {
    c.categorical.clear();
    for (const auto& item : split_list(value)) c.categorical.insert(to_int<std::size_t>(key, item));
  } else if (key == "encoding") {
    const std::string v = trim(value);
    if (v == "ordinal") c.encoding = CategoricalEncoding::kOrdinal;
    else if (v == "one-hot") c.encoding = CategoricalEncoding::kOneHot;
    else bad_value(key, value, "ordinal or one-hot");
  } else if (key == "normalize") {
    c.normalize = to_bool(key, value);
  } else if (key == "clusters") {
    c.clusters = to_int<std::size_t>(key, value);
  } else if (key == "intermediate-clusters") {
    c.intermediate_clusters = to_int<std::size_t>(key, value);
  } else if (key == "fuzzifier") {
    c.fuzzifier = to_double(key, value);
  } else if (key == "epsilon") {
    c.epsilon = to_double(key, value);
  } else if (key == "driver-epsilon") {
    c.driver_epsilon = to_double(key, value);
  } else if (key == "combiner-epsilon") {
    c.combiner_epsilon = to_double(key, value);
  } else if (key == "max-iter") {
    c.max_iterations = to_int<std::size_t>(key, value);
  } else if (key == "seed") {
    c.seed = to_int<std::uint64_t>(key, value);
  } else if (key == "partitions") {
    c.partitions = to_int<std::size_t>(key, value);
  } else if (key == "parallelism") {
    c.parallelism = to_int<std::size_t>(key, value);
  } else if (key == "deterministic") {
    c.deterministic = to_bool(key, value);
  } else if (key == "block-size") {
    c.block_size = to_int<std::size_t>(key, value);
  } else if (key == "reduce-groups") {
    c.reduce_groups = to_int<std::size_t>(key, value);
  } else if (key == "flag") {
    const std::string v = trim(value);
    if (v == "auto") c.flag = FlagPolicy::kTimed;
    else if (v == "fcm") c.flag = FlagPolicy::kForceFast;
    else if (v == "wfcmpb") c.flag = FlagPolicy::kForceBlockProgressive;
    else bad_value(key, value, "auto, fcm or wfcmpb");
  } else if (key == "driver-seeding") {
    c.driver_seeding = to_bool(key, value);
  } else if (key == "sample-size") {
    c.sample_size = to_int<std::size_t>(key, value);
  } else if (key == "alpha") {
    c.alpha = to_double(key, value);
  } else if (key == "rel-diff") {
    c.rel_diff = to_double(key, value);
  } else if (key == "d") {
    c.thompson_d = to_double(key, value);
  } else if (key.rfind("v-alpha.", 0) == 0) {
    c.v_table.set(to_double(key, key.substr(8)), to_double(key, value));
  } else if (key == "silhouette-cap") {
    c.silhouette_cap = to_int<std::size_t>(key, value);
  } else if (key == "mode") {
    c.bench_mode = trim(value);
  } else if (key == "values") {
    c.values.clear();
    for (const auto& item : split_list(value)) c.values.push_back(to_double(key, item));
  } else if (key == "synthetic") {
    c.synthetic = to_int<std::size_t>(key, value);
  } else if (key == "synthetic-sigma") {
    c.synthetic_sigma = to_double(key, value);
  } else if (key == "budget-ms") {
    c.budget_ms = to_double(key, value);
  } else if (key == "with-baseline") {
    c.with_baseline = to_bool(key, value);
  } else {
    throw InvalidInput("unknown setting '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key=value in config file '" + path + "'", line_no, 1);
    out.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return out;
}

nlohmann::json echo(const RunConfig& c) {
  nlohmann::json j;
  j["input"] = c.input;
  j["output"] = c.output;
  j["delimiter"] = std::string(1, c.delimiter);
  j["header"] = c.header;
  j["label_column"] = c.label_column ? nlohmann::json(*c.label_column) : nlohmann::json(nullptr);
  j["categorical"] = c.categorical;
  j["encoding"] = c.encoding == CategoricalEncoding::kOneHot ? "one-hot" : "ordinal";
  j["normalize"] = c.normalize;
  j["clusters"] = c.clusters;
  j["intermediate_clusters"] = c.effective_intermediate();
  j["fuzzifier"] = c.fuzzifier;
  j["epsilon"] = c.epsilon;
  j["driver_epsilon"] = c.effective_driver_epsilon();
  j["combiner_epsilon"] = c.combiner_epsilon;
  j["max_iterations"] = c.max_iterations;
  j["seed"] = c.seed;
  j["partitions"] = c.partitions;
  j["parallelism"] = c.effective_parallelism();
  j["deterministic"] = c.deterministic;
  j["block_size"] = to_pipeline_config(c).effective_block_size();
  j["reduce_groups"] = c.reduce_groups;
  j["flag"] = c.flag == FlagPolicy::kTimed ? "auto"
              : c.flag == FlagPolicy::kForceFast ? "fcm" : "wfcmpb";
  j["driver_seeding"] = c.driver_seeding;
  j["sample_size"] = c.sample_size;
  j["alpha"] = c.alpha;
  j["rel_diff"] = c.rel_diff;
  j["v_alpha"] = c.v_table.contains(c.alpha) ? nlohmann::json(c.v_table.lookup(c.alpha))
                                             : nlohmann::json(nullptr);
  j["silhouette_cap"] = c.silhouette_cap;
  if (!c.bench_mode.empty()) {
    j["mode"] = c.bench_mode;
    j["values"] = c.values;
    j["synthetic"] = c.synthetic;
    j["synthetic_sigma"] = c.synthetic_sigma;
    j["budget_ms"] = c.budget_ms;
    j["with_baseline"] = c.with_baseline;
  }
  return j;
}

PipelineConfig to_pipeline_config(const RunConfig& c) {
  PipelineConfig p;
  p.params.c = c.clusters;
  p.params.c_intermediate = c.effective_intermediate();
  p.params.m = c.fuzzifier;
  p.params.epsilon = c.epsilon;
  p.params.max_iterations = c.max_iterations;
  p.params.seed = c.seed;
  p.driver_epsilon = c.effective_driver_epsilon();
  p.combiner_epsilon = c.combiner_epsilon;
  p.partitions = c.partitions;
  p.parallelism = c.effective_parallelism();
  p.sample_size = c.sample_size;
  p.v_alpha = c.v_table.lookup(c.alpha);
  p.relative_difference = c.rel_diff;
  p.block_size = c.block_size;
  p.reduce_groups = c.reduce_groups;
  p.deterministic = c.deterministic;
  p.driver_seeding = c.driver_seeding;
  p.flag_policy = c.flag;
  return p;
}

DatasetSchema to_schema(const RunConfig& c) {
  DatasetSchema s;
  s.delimiter = c.delimiter;
  s.has_header = c.header;
  s.label_column = c.label_column;
  s.categorical_columns = c.categorical;
  s.encoding = c.encoding;
  return s;
}

std::string ingest_path_for(const std::string& model_path) { return model_path + ".ingest.json"; }

}  // namespace pfcm::cli
