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

#include <atomic>
#include <csignal>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "pfcm/cli.hpp"
#include "pfcm/error.hpp"

namespace {

std::atomic<bool> g_cancel{false};

extern "C" void on_signal(int) { g_cancel.store(true); }

using Overrides = std::vector<std::pair<std::string, std::string>>;

void value_option(CLI::App* app, Overrides& overrides, const std::string& flag,
                  const std::string& help) {
  const std::string key = flag.substr(2);
  app->add_option_function<std::string>(
      flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); }, help);
}

void switch_option(CLI::App* app, Overrides& overrides, const std::string& flag,
                   const std::string& key, const std::string& value, const std::string& help) {
  app->add_flag_callback(flag, [&overrides, key, value] { overrides.emplace_back(key, value); },
                         help);
}

void data_options(CLI::App* app, Overrides& o) {
  value_option(app, o, "--input", "Delimited text input file");
  value_option(app, o, "--delimiter", "Field delimiter (default ',')");
  switch_option(app, o, "--header", "header", "true", "First line is a header");
  value_option(app, o, "--label-column", "Label column index, negative from the end, or 'last'");
  value_option(app, o, "--categorical", "Comma-separated categorical column indices");
  value_option(app, o, "--encoding", "Categorical encoding: ordinal | one-hot");
  switch_option(app, o, "--normalize", "normalize", "true", "Min-max normalize features (default)");
  switch_option(app, o, "--no-normalize", "normalize", "false", "Keep raw feature values");
}

void cluster_options(CLI::App* app, Overrides& o) {
  value_option(app, o, "--clusters", "Final cluster count C");
  value_option(app, o, "--intermediate-clusters", "Clusters per combiner (default C)");
  value_option(app, o, "--fuzzifier", "Fuzzifier m > 1 (default 2)");
  value_option(app, o, "--epsilon", "Reducer epsilon (default 5e-7)");
  value_option(app, o, "--driver-epsilon", "Driver epsilon (default epsilon / 100)");
  value_option(app, o, "--combiner-epsilon", "Combiner epsilon (default 1e-6)");
  value_option(app, o, "--max-iter", "Iteration cap per solve (default 1000)");
  value_option(app, o, "--partitions", "Partition count (default 8)");
  value_option(app, o, "--parallelism", "Worker threads (default: hardware threads)");
  value_option(app, o, "--seed", "Run seed");
  value_option(app, o, "--sample-size", "Explicit driver sample size");
  value_option(app, o, "--alpha", "Sampling alpha (default 0.05)");
  value_option(app, o, "--rel-diff", "Sampling relative difference r (default 0.10)");
  value_option(app, o, "--block-size", "Block size for block-progressive clustering");
  value_option(app, o, "--reduce-groups", "Intermediate reducer groups (default 4)");
  value_option(app, o, "--flag", "Combiner solver: auto | fcm | wfcmpb");
  switch_option(app, o, "--deterministic", "deterministic", "true",
                "Reduce in partition order (default)");
  switch_option(app, o, "--free-order", "deterministic", "false",
                "Reduce in completion order (non-deterministic centers)");
  switch_option(app, o, "--random-seeds", "driver-seeding", "false",
                "Skip driver seeding; combiners start from random points");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pfcm::cli;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  CLI::App app{"Partitioned fuzzy c-means clustering"};
  app.require_subcommand(1);
  Overrides overrides;
  std::string config_path;

  auto* cluster = app.add_subcommand("cluster", "Cluster a dataset and write a model file");
  auto* eval = app.add_subcommand("eval", "Evaluate a model against a labeled dataset");
  auto* bench = app.add_subcommand("bench", "Run a benchmark sweep and print a table");
  auto* sample = app.add_subcommand("sample-size", "Print the driver sample size");

  for (auto* sub : {cluster, eval, bench, sample}) {
    sub->add_option("--config", config_path, "Flat key=value config file");
  }
  for (auto* sub : {cluster, eval, bench}) {
    data_options(sub, overrides);
    value_option(sub, overrides, "--output", "Output file");
  }
  for (auto* sub : {cluster, bench}) cluster_options(sub, overrides);

  value_option(eval, overrides, "--model", "Model file written by 'cluster'");
  value_option(eval, overrides, "--seed", "Seed for silhouette sampling");
  value_option(eval, overrides, "--silhouette-cap", "Silhouette sample cap (default 4000)");

  value_option(bench, overrides, "--mode",
               "epsilon-sweep | size-sweep | partition-sweep | baseline-compare");
  value_option(bench, overrides, "--values", "Comma-separated sweep values");
  value_option(bench, overrides, "--synthetic", "Generate N four-Gaussian points instead of --input");
  value_option(bench, overrides, "--synthetic-sigma", "Component sigma for --synthetic");
  value_option(bench, overrides, "--budget-ms", "Stop starting rows after this many ms");
  switch_option(bench, overrides, "--with-baseline", "with-baseline", "true",
                "Also time single-worker fcm_fast in every row");

  value_option(sample, overrides, "--alpha", "Tabulated alpha (default 0.05)");
  value_option(sample, overrides, "--rel-diff", "Relative difference r (Parker-Hall)");
  value_option(sample, overrides, "--d", "Absolute precision d (Thompson)");
  value_option(sample, overrides, "--clusters", "Cluster count c");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  RunConfig config;
  try {
    if (!config_path.empty())
      for (const auto& [key, value] : read_config_file(config_path))
        apply_setting(config, key, value);
    for (const auto& [key, value] : overrides) apply_setting(config, key, value);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (cluster->parsed()) return cmd_cluster(config, std::cout, std::cerr, &g_cancel);
  if (eval->parsed()) return cmd_eval(config, std::cout, std::cerr);
  if (bench->parsed()) return cmd_bench(config, std::cout, std::cerr, &g_cancel);
  return cmd_sample_size(config, std::cout, std::cerr);
}
