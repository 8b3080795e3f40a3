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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pfcm/ingest.hpp"
#include "pfcm/pipeline.hpp"
#include "pfcm/sampling.hpp"

namespace pfcm::cli {

/// Every setting a command can take. Built-in defaults are the member
/// initializers; a config file and then command-line flags override them
/// through apply_setting.
struct RunConfig {
  // Data.
  std::string input;
  std::string output;
  std::string model;
  char delimiter = ',';
  bool header = false;
  std::optional<long> label_column;
  std::set<std::size_t> categorical;
  CategoricalEncoding encoding = CategoricalEncoding::kOrdinal;
  bool normalize = true;

  // Clustering.
  std::size_t clusters = 2;
  std::optional<std::size_t> intermediate_clusters;  ///< defaults to clusters
  double fuzzifier = 2.0;
  double epsilon = 5.0e-7;          ///< reducer epsilon
  std::optional<double> driver_epsilon;  ///< defaults to epsilon / 100
  double combiner_epsilon = 1.0e-6;
  std::size_t max_iterations = 1000;
  std::uint64_t seed = 42;
  std::size_t partitions = 8;
  std::size_t parallelism = 0;      ///< 0: hardware concurrency
  bool deterministic = true;
  std::size_t block_size = 0;
  std::size_t reduce_groups = 4;
  FlagPolicy flag = FlagPolicy::kTimed;
  bool driver_seeding = true;

  // Sampling.
  std::size_t sample_size = 0;      ///< explicit; 0 = alpha/r rule
  double alpha = VAlphaTable::kDefaultAlpha;
  double rel_diff = 0.10;
  std::optional<double> thompson_d;
  VAlphaTable v_table;

  // Evaluation.
  std::size_t silhouette_cap = 4000;

  // Benchmarks.
  std::string bench_mode;
  std::vector<double> values;
  std::size_t synthetic = 0;
  double synthetic_sigma = 0.1;
  double budget_ms = 0.0;  ///< 0: unlimited
  bool with_baseline = false;

  std::size_t effective_parallelism() const;
  std::size_t effective_intermediate() const;
  double effective_driver_epsilon() const { return driver_epsilon.value_or(epsilon / 100.0); }
};

/// Applies one `key=value` setting; keys match the long flag names without
/// dashes (e.g. "clusters", "driver-epsilon", "v-alpha.0.05"). Throws
/// InvalidInput for unknown keys or malformed values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Reads a flat `key = value` file; blank lines and lines starting with '#'
/// are ignored.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Full effective configuration, defaults resolved.
nlohmann::json echo(const RunConfig& config);

PipelineConfig to_pipeline_config(const RunConfig& config);
DatasetSchema to_schema(const RunConfig& config);

/// Path of the ingestion sidecar written next to a model file.
std::string ingest_path_for(const std::string& model_path);

// Commands return the process exit status. Reports go to `out`, progress and
// errors to `err`.

int cmd_cluster(const RunConfig& config, std::ostream& out, std::ostream& err,
                const std::atomic<bool>* cancel = nullptr);
int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sample_size(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err,
              const std::atomic<bool>* cancel = nullptr);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIncomplete = 3;

}  // namespace pfcm::cli
