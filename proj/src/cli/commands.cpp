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

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "pfcm/cli.hpp"
#include "pfcm/error.hpp"
#include "pfcm/metrics.hpp"
#include "pfcm/numeric.hpp"
#include "pfcm/seed.hpp"
#include "pfcm/solvers.hpp"
#include "pfcm/synthetic.hpp"

namespace pfcm::cli {
namespace {

double since_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing '" + path + "'");
}

Dataset load_input(const RunConfig& config) {
  if (config.input.empty()) throw InvalidInput("no input file given (--input)");
  if (!std::filesystem::exists(config.input))
    throw InvalidInput("input file '" + config.input + "' does not exist");
  return load_dataset_file(config.input, to_schema(config), config.normalize);
}

std::string default_output(const RunConfig& config) {
  return config.output.empty() ? "pfcm-model.json" : config.output;
}

}  // namespace

int cmd_cluster(const RunConfig& config, std::ostream& out, std::ostream& err,
                const std::atomic<bool>* cancel) {
  const std::string output = default_output(config);
  try {
    Dataset data = [&] {
      try {
        return load_input(config);
      } catch (const std::exception& e) {
        throw StageError("ingest", std::nullopt, e.what());
      }
    }();
    err << "stage ingest done: " << data.features.rows() << " records, "
        << data.features.dim() << " features\n";

    PipelineHooks hooks;
    hooks.on_event = [&err](const std::string& line) { err << line << '\n'; };
    hooks.cancel = cancel;
    const ClusterModel model = run_pipeline(data.features, to_pipeline_config(config), hooks);

    nlohmann::json doc = to_json(model, echo(config));
    doc["complete"] = true;
    write_json_file(output, doc);
    write_json_file(ingest_path_for(output), to_json(data.state));

    out << "wrote " << output << " (" << model.final_centers.rows() << " centers, d="
        << model.final_centers.dim() << ", total " << std::fixed << std::setprecision(1)
        << model.report.total_ms << " ms)\n";
    return kExitOk;
  } catch (const Cancelled& e) {
    nlohmann::json partial = {{"complete", false}, {"error", e.what()}, {"config", echo(config)}};
    try {
      write_json_file(output, partial);
    } catch (...) {
    }
    err << "error: " << e.what() << " (partial report written to " << output << ")\n";
    return kExitIncomplete;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.model.empty()) throw InvalidInput("no model file given (--model)");
    std::ifstream model_in(config.model);
    if (!model_in) throw InvalidInput("cannot open model file '" + config.model + "'");
    const LoadedModel model = read_model(model_in);

    IngestState state;
    const std::string sidecar = ingest_path_for(config.model);
    if (std::filesystem::exists(sidecar)) {
      std::ifstream in(sidecar);
      state = ingest_state_from_json(nlohmann::json::parse(in));
      if (config.label_column) state.schema.label_column = config.label_column;
    } else {
      state.schema = to_schema(config);
      state.feature_count = model.centers.dim();
    }
    if (!state.schema.label_column)
      throw InvalidInput("evaluation needs a label column (--label-column)");

    if (config.input.empty()) throw InvalidInput("no input file given (--input)");
    std::ifstream data_in(config.input);
    if (!data_in) throw InvalidInput("cannot open input file '" + config.input + "'");
    Dataset data;
    if (std::filesystem::exists(sidecar)) {
      data = apply_ingest(data_in, state);
    } else {
      data = load_dataset(data_in, state.schema, false);
    }
    if (data.features.dim() != model.centers.dim())
      throw InvalidInput("model has dimension " + std::to_string(model.centers.dim()) +
                         " but data has dimension " + std::to_string(data.features.dim()));
    if (data.labels.empty()) throw InvalidInput("evaluation needs a label column");

    EvalReport report;
    report.records = data.features.rows();
    const auto assignments = assign(data.features, model.centers);
    const AccuracyResult acc = confusion_accuracy(assignments, data.labels);
    report.accuracy = acc.accuracy;
    report.mapping = acc.mapping;
    try {
      const SilhouetteResult sil = silhouette_width(data.features, assignments,
                                                    config.silhouette_cap,
                                                    derive_seed(config.seed, "silhouette"));
      report.silhouette = sil.value;
      report.silhouette_sample = sil.sample_size;
    } catch (const UndefinedMetric& e) {
      err << "warning: " << e.what() << '\n';
      report.silhouette = std::nan("");
    }
    if (model.document.contains("timings_ms"))
      for (const auto& [name, ms] : model.document["timings_ms"].items())
        report.runtimes_ms[name] = ms.get<double>();

    out << render_table(report);
    if (!config.output.empty()) {
      nlohmann::json j = to_json(report);
      j["config"] = echo(config);
      j["complete"] = true;
      write_json_file(config.output, j);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_sample_size(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const double v = config.v_table.lookup(config.alpha);
    std::ostringstream formula;
    formula << std::setprecision(10);
    std::size_t lambda = 0;
    if (config.thompson_d) {
      const double d = *config.thompson_d;
      lambda = thompson_size(config.alpha, d, config.v_table);
      formula << "thompson: ceil(v(" << config.alpha << ") / d^2) = ceil(" << v << " / " << d
              << "^2) = ceil(" << v / (d * d) << ") = " << lambda;
    } else {
      const double r = config.rel_diff;
      lambda = parker_hall_size(v, config.clusters, r);
      formula << "parker-hall: ceil(v(" << config.alpha << ") * c^2 / r^2) = ceil(" << v
              << " * " << config.clusters << "^2 / " << r << "^2) = ceil("
              << v * static_cast<double>(config.clusters * config.clusters) / (r * r)
              << ") = " << lambda;
    }
    out << lambda << '\n' << formula.str() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err,
              const std::atomic<bool>* cancel) {
  try {
    const std::string& mode = config.bench_mode;
    if (mode != "epsilon-sweep" && mode != "size-sweep" && mode != "partition-sweep" &&
        mode != "baseline-compare")
      throw InvalidInput("unknown bench mode '" + mode +
                         "' (epsilon-sweep, size-sweep, partition-sweep, baseline-compare)");

    Matrix data;
    if (config.synthetic > 0) {
      data = sample_mixture(four_corners(10.0, config.synthetic_sigma), config.synthetic,
                            derive_seed(config.seed, "bench-data"))
                 .points;
    } else {
      data = load_input(config).features;
    }

    std::vector<double> values = config.values;
    if (values.empty()) {
      if (mode == "epsilon-sweep") values = {5e-2, 5e-3, 5e-5, 5e-7};
      else if (mode == "partition-sweep") values = {1, 2, 4, 8};
      else if (mode == "size-sweep")
        for (double f : {0.125, 0.25, 0.5, 1.0})
          values.push_back(std::floor(f * static_cast<double>(data.rows())));
      else values = {config.epsilon};
    }

    // Objectives of every row are measured on the same fixed sample.
    const Matrix validation = reservoir_sample(data, std::min<std::size_t>(10000, data.rows()),
                                               derive_seed(config.seed, "bench-validation"));

    nlohmann::json header_echo = echo(config);
    out << "# " << header_echo.dump() << '\n';
    out << "mode,value,method,wall_ms,iterations,objective,speedup\n";
    out << std::setprecision(10);

    const auto bench_start = std::chrono::steady_clock::now();
    bool complete = true;
    for (double value : values) {
      if (config.budget_ms > 0.0 && since_ms(bench_start) > config.budget_ms) {
        complete = false;
        break;
      }
      if (cancel && cancel->load()) {
        complete = false;
        break;
      }
      RunConfig run = config;
      PointsView view = data;
      if (mode == "epsilon-sweep") {
        run.epsilon = value;
        run.driver_epsilon.reset();
      } else if (mode == "size-sweep") {
        view = data.view().slice(0, std::min<std::size_t>(data.rows(), static_cast<std::size_t>(value)));
      } else if (mode == "partition-sweep") {
        run.partitions = static_cast<std::size_t>(value);
        run.parallelism = static_cast<std::size_t>(value);
      } else {
        run.epsilon = value;
        run.driver_epsilon.reset();
      }

      auto t0 = std::chrono::steady_clock::now();
      const ClusterModel model = run_pipeline(view, to_pipeline_config(run));
      const double pipeline_ms = since_ms(t0);
      const double pipeline_q = fcm_objective(validation, model.final_centers, run.fuzzifier);

      std::optional<double> baseline_ms;
      if (mode == "baseline-compare" || config.with_baseline) {
        FcmParams p = to_pipeline_config(run).params;
        p.compute_objective = false;
        t0 = std::chrono::steady_clock::now();
        const SolveResult base =
            fcm_fast(view, random_init(view, p.c, derive_seed(run.seed, "baseline-init")), p);
        baseline_ms = since_ms(t0);
        out << mode << ',' << value << ",fcm_fast," << *baseline_ms << ',' << base.iterations
            << ',' << fcm_objective(validation, base.centers, run.fuzzifier) << ",\n";
      }
      out << mode << ',' << value << ",pipeline," << pipeline_ms << ','
          << model.report.combiner_iterations_total + model.report.reducer_iterations << ','
          << pipeline_q << ',';
      if (baseline_ms) out << relative_speedup(*baseline_ms, pipeline_ms);
      out << '\n' << std::flush;
    }
    if (!complete) {
      out << "# incomplete: " << (cancel && cancel->load() ? "cancelled" : "budget exceeded")
          << '\n';
      err << "warning: benchmark stopped early; table is incomplete\n";
      return kExitIncomplete;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace pfcm::cli
