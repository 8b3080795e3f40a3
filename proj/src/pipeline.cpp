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

#include "pfcm/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "pfcm/error.hpp"
#include "pfcm/ingest.hpp"
#include "pfcm/kernels.hpp"
#include "pfcm/numeric.hpp"
#include "pfcm/sampling.hpp"
#include "pfcm/seed.hpp"
#include "pfcm/worker_pool.hpp"

namespace pfcm {

double SteadyClock::now() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

void SeedStore::publish(Matrix centers) {
  std::lock_guard lock(mu_);
  if (centers_) throw InvalidInput("seed store: centers already published");
  centers_ = std::make_shared<const Matrix>(std::move(centers));
}

std::shared_ptr<const Matrix> SeedStore::get() const {
  std::lock_guard lock(mu_);
  return centers_;
}

void PipelineConfig::validate() const {
  params.validate();
  if (driver_epsilon < 0.0 || !std::isfinite(driver_epsilon))
    throw ParameterError("driver epsilon must be >= 0 (0 selects the default)");
  if (!(combiner_epsilon > 0.0)) throw ParameterError("combiner epsilon must be > 0");
  if (partitions < 1) throw ParameterError("partitions must be >= 1");
  if (parallelism < 1) throw ParameterError("parallelism must be >= 1");
  if (reduce_groups < 1) throw ParameterError("reduce groups must be >= 1");
  if (block_size != 0 && block_size < params.c_intermediate)
    throw ParameterError("block size must be >= intermediate clusters");
}

double PipelineConfig::effective_driver_epsilon() const {
  return driver_epsilon > 0.0 ? driver_epsilon : params.epsilon / 100.0;
}

std::size_t PipelineConfig::effective_sample_size(std::size_t records) const {
  if (sample_size > 0) return std::min(sample_size, records);
  return default_sample_size(params.c_intermediate, records, v_alpha, relative_difference);
}

std::size_t PipelineConfig::effective_block_size() const {
  if (block_size > 0) return block_size;
  return std::max(parker_hall_size(v_alpha, params.c_intermediate, 0.20),
                  params.c_intermediate);
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

void emit(const PipelineHooks& hooks, const std::string& line) {
  if (hooks.on_event) hooks.on_event(line);
}

void check_cancel(const PipelineHooks& hooks, const char* stage) {
  if (hooks.cancel && hooks.cancel->load())
    throw Cancelled(std::string("run cancelled before stage ") + stage);
}

std::string format_ms(double ms) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(1);
  s << ms;
  return s.str();
}

}  // namespace

DriverDecision run_driver(PointsView sample, const FcmParams& params, double driver_epsilon,
                          std::size_t block_size, Clock& clock, SeedStore* store,
                          FlagPolicy policy) {
  if (!(driver_epsilon > 0.0)) throw ParameterError("driver epsilon must be > 0");
  if (sample.rows() < params.c_intermediate)
    throw InvalidInput("driver: sample of " + std::to_string(sample.rows()) +
                       " records is smaller than the " +
                       std::to_string(params.c_intermediate) + " intermediate clusters");

  FcmParams p = params;
  p.c = params.c_intermediate;
  p.epsilon = driver_epsilon;
  p.compute_objective = false;
  const Matrix init = random_init(sample, p.c, derive_seed(params.seed, "driver-init"));

  DriverDecision decision;
  decision.sample_size = sample.rows();

  const double f0 = clock.now();
  SolveResult block = wfcmpb(sample, init, p, std::max(block_size, p.c));
  clock.charge(block.evaluations);
  const double f1 = clock.now();

  const double s0 = clock.now();
  SolveResult fast = fcm_fast(sample, init, p);
  clock.charge(fast.evaluations);
  const double s1 = clock.now();

  decision.t_wfcmpb = f1 - f0;
  decision.t_fcm = s1 - s0;
  decision.wfcmpb_iterations = block.iterations;
  decision.fcm_iterations = fast.iterations;

  bool use_fast = decision.t_wfcmpb - decision.t_fcm > 0.0;
  if (policy == FlagPolicy::kForceFast) use_fast = true;
  if (policy == FlagPolicy::kForceBlockProgressive) use_fast = false;
  if (use_fast) {
    decision.flag = CombinerSolver::kFast;
    decision.seed_centers = std::move(fast.centers);
  } else {
    decision.flag = CombinerSolver::kBlockProgressive;
    decision.seed_centers = std::move(block.centers);
  }
  if (store) store->publish(decision.seed_centers);
  return decision;
}

CombinerOutput run_combiner(PointsView partition, std::size_t partition_index,
                            const DriverDecision& decision, const FcmParams& params,
                            std::size_t block_size) {
  if (partition.rows() == 0) throw InvalidInput("combiner: empty partition");
  const std::size_t c = params.c_intermediate;
  if (!decision.seed_centers.empty() && decision.seed_centers.dim() != partition.dim())
    throw InvalidInput("combiner: partition dimension " + std::to_string(partition.dim()) +
                       " vs seed dimension " + std::to_string(decision.seed_centers.dim()));

  CombinerOutput out;
  out.source_partition = partition_index;
  if (partition.rows() < c) {
    require_finite(partition, "combiner");
    out.centers = Matrix(partition);
    out.weights.assign(partition.rows(), 1.0);
    out.passthrough = true;
    return out;
  }

  FcmParams p = params;
  p.c = c;
  p.compute_objective = false;
  const Matrix seeds =
      decision.seed_centers.empty()
          ? random_init(partition, c, derive_seed(params.seed, "combiner-init", partition_index))
          : decision.seed_centers;

  SolveResult r = decision.flag == CombinerSolver::kFast
                      ? fcm_fast(partition, seeds, p)
                      : wfcmpb(partition, seeds, p, std::max(block_size, c));
  out.centers = std::move(r.centers);
  out.weights = std::move(r.weights);
  out.iterations = r.iterations;
  return out;
}

ClusterModel run_reducer(const std::vector<CombinerOutput>& outputs, const FcmParams& params) {
  if (outputs.empty()) throw InvalidInput("reducer: no combiner outputs");
  const std::size_t d = outputs.front().centers.dim();
  Matrix pool(0, d);
  std::vector<double> weights;
  for (const auto& o : outputs) {
    if (o.centers.dim() != d)
      throw InvalidInput("reducer: combiner outputs disagree on dimension");
    if (o.weights.size() != o.centers.rows())
      throw InvalidInput("reducer: combiner output has mismatched weights");
    for (std::size_t i = 0; i < o.centers.rows(); ++i) {
      if (o.weights[i] > 0.0) {
        pool.append(o.centers.row(i));
        weights.push_back(o.weights[i]);
      }
    }
  }
  if (pool.rows() < params.c)
    throw DegenerateInput("reducer: " + std::to_string(pool.rows()) +
                          " non-empty pooled centers for " + std::to_string(params.c) +
                          " clusters");

  // Seed with the first c centers of the first output (V_1); fall back to the
  // head of the pool when that output is too small.
  Matrix init(0, d);
  const auto& first = outputs.front();
  const bool first_is_enough =
      std::count_if(first.weights.begin(), first.weights.end(), [](double w) { return w > 0.0; }) >=
      static_cast<std::ptrdiff_t>(params.c);
  for (std::size_t i = 0, taken = 0; taken < params.c; ++i) {
    if (first_is_enough) {
      if (first.weights[i] > 0.0) {
        init.append(first.centers.row(i));
        ++taken;
      }
    } else {
      init.append(pool.row(i));
      ++taken;
    }
  }

  SolveResult r = wfcm(pool, weights, init, params);
  ClusterModel model;
  model.final_centers = std::move(r.centers);
  model.final_weights = std::move(r.weights);
  model.objective = r.objective;
  model.converged = r.converged;
  model.report.pooled_centers = pool.rows();
  model.report.reducer_iterations = r.iterations;
  return model;
}

ClusterModel run_pipeline(PointsView dataset, const PipelineConfig& config,
                          const PipelineHooks& hooks) {
  config.validate();
  if (dataset.rows() == 0) throw InvalidInput("pipeline: empty dataset");
  const auto run_start = std::chrono::steady_clock::now();
  const FcmParams& params = config.params;

  StageReport report;
  report.records = dataset.rows();
  report.kernels = std::string(kernels::name(kernels::active().isa));
  report.block_size = config.effective_block_size();

  // Driver.
  check_cancel(hooks, "driver");
  auto stage_start = std::chrono::steady_clock::now();
  Matrix sample;
  DriverDecision decision;
  SeedStore store;
  try {
    sample = reservoir_sample(dataset, config.effective_sample_size(dataset.rows()),
                              derive_seed(params.seed, "driver-sample"));
    if (config.driver_seeding) {
      WorkClock work_clock;
      SteadyClock wall_clock;
      Clock& clock = hooks.clock ? *hooks.clock
                                 : (config.deterministic ? static_cast<Clock&>(work_clock)
                                                         : static_cast<Clock&>(wall_clock));
      decision = run_driver(sample, params, config.effective_driver_epsilon(),
                            report.block_size, clock, &store, config.flag_policy);
    } else {
      // Random combiner seeds; combiners run plain fcm_fast.
      decision.flag = config.flag_policy == FlagPolicy::kForceBlockProgressive
                          ? CombinerSolver::kBlockProgressive
                          : CombinerSolver::kFast;
      decision.sample_size = sample.rows();
      store.publish(Matrix());
    }
  } catch (const Cancelled&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("driver", std::nullopt, e.what());
  }
  report.sample_size = decision.sample_size;
  report.flag = static_cast<int>(decision.flag);
  report.t_wfcmpb_s = decision.t_wfcmpb;
  report.t_fcm_s = decision.t_fcm;
  report.driver_wfcmpb_iterations = decision.wfcmpb_iterations;
  report.driver_fcm_iterations = decision.fcm_iterations;
  report.driver_ms = elapsed_ms(stage_start);
  emit(hooks, "stage driver done: " + format_ms(report.driver_ms) + " ms, sample " +
                  std::to_string(report.sample_size) + ", flag " + std::to_string(report.flag));

  // Combiners. Each reads the published seeds; nothing else is shared.
  check_cancel(hooks, "combine");
  stage_start = std::chrono::steady_clock::now();
  const PartitionPlan plan = plan_partitions(dataset.rows(), config.partitions);
  report.partitions = plan.count();
  report.partitions_clamped = plan.clamped;
  if (plan.clamped)
    emit(hooks, "warning: " + std::to_string(plan.requested) + " partitions requested for " +
                    std::to_string(dataset.rows()) + " records; clamped to " +
                    std::to_string(plan.count()));

  DriverDecision published = decision;
  published.seed_centers = *store.get();
  FcmParams combiner_params = params;
  combiner_params.epsilon = config.combiner_epsilon;

  std::vector<CombinerOutput> outputs(plan.count());
  std::vector<CombinerOutput> arrival;
  std::mutex arrival_mu;
  auto failure = parallel_for(
      plan.count(), config.parallelism,
      [&](std::size_t p) {
        const auto [begin, end] = plan.ranges[p];
        CombinerOutput out = run_combiner(dataset.slice(begin, end), p, published,
                                          combiner_params, report.block_size);
        if (config.deterministic) {
          outputs[p] = std::move(out);
        } else {
          std::lock_guard lock(arrival_mu);
          arrival.push_back(std::move(out));
        }
      },
      hooks.cancel);
  if (failure) {
    try {
      std::rethrow_exception(failure->error);
    } catch (const std::exception& e) {
      throw StageError("combine", failure->index, e.what());
    }
  }
  check_cancel(hooks, "reduce");
  if (!config.deterministic) outputs = std::move(arrival);

  report.combiner_iterations.assign(plan.count(), 0);
  for (const auto& o : outputs) {
    report.combiner_iterations[o.source_partition] = o.iterations;
    report.combiner_iterations_total += o.iterations;
    report.pooled_centers += o.centers.rows();
  }
  report.combine_ms = elapsed_ms(stage_start);
  emit(hooks, "stage combine done: " + format_ms(report.combine_ms) + " ms, " +
                  std::to_string(plan.count()) + " partitions, " +
                  std::to_string(report.combiner_iterations_total) + " iterations");

  // Optional intermediate reducers over contiguous groups of outputs.
  const std::size_t threshold = 10 * params.c_intermediate * config.reduce_groups;
  if (report.pooled_centers > threshold && outputs.size() >= 2) {
    stage_start = std::chrono::steady_clock::now();
    const std::size_t groups = std::min(config.reduce_groups, outputs.size());
    const PartitionPlan group_plan = plan_partitions(outputs.size(), groups);
    std::vector<CombinerOutput> merged(group_plan.count());
    std::vector<std::size_t> group_iterations(group_plan.count());
    auto group_failure = parallel_for(
        group_plan.count(), config.parallelism,
        [&](std::size_t g) {
          const auto [begin, end] = group_plan.ranges[g];
          std::vector<CombinerOutput> group(outputs.begin() + static_cast<std::ptrdiff_t>(begin),
                                            outputs.begin() + static_cast<std::ptrdiff_t>(end));
          ClusterModel partial = run_reducer(group, params);
          group_iterations[g] = partial.report.reducer_iterations;
          merged[g] = {g, std::move(partial.final_centers), std::move(partial.final_weights),
                       partial.report.reducer_iterations, false};
        },
        hooks.cancel);
    if (group_failure) {
      try {
        std::rethrow_exception(group_failure->error);
      } catch (const std::exception& e) {
        throw StageError("intermediate-reduce", group_failure->index, e.what());
      }
    }
    report.hierarchical = true;
    report.reduce_groups = group_plan.count();
    for (std::size_t it : group_iterations) report.intermediate_reducer_iterations += it;
    outputs = std::move(merged);
    report.intermediate_reduce_ms = elapsed_ms(stage_start);
    emit(hooks, "stage intermediate-reduce done: " + format_ms(report.intermediate_reduce_ms) +
                    " ms, " + std::to_string(report.reduce_groups) + " groups");
  }

  // Final reducer.
  check_cancel(hooks, "reduce");
  stage_start = std::chrono::steady_clock::now();
  ClusterModel model;
  try {
    model = run_reducer(outputs, params);
    model.objective = fcm_objective(sample, model.final_centers, params.m);
  } catch (const std::exception& e) {
    throw StageError("reduce", std::nullopt, e.what());
  }
  report.reducer_iterations = model.report.reducer_iterations;
  report.reduce_ms = elapsed_ms(stage_start);
  emit(hooks, "stage reduce done: " + format_ms(report.reduce_ms) + " ms, " +
                  std::to_string(report.reducer_iterations) + " iterations");

  report.total_ms = elapsed_ms(run_start);
  model.report = std::move(report);
  return model;
}

nlohmann::json to_json(const ClusterModel& model, const nlohmann::json& config_echo) {
  const auto& r = model.report;
  nlohmann::json j;
  j["format"] = "pfcm-model/1";
  j["dimension"] = model.final_centers.dim();
  j["centers"] = model.final_centers.to_rows();
  j["weights"] = model.final_weights;
  j["objective"] = model.objective;
  j["converged"] = model.converged;
  j["flag"] = r.flag;
  j["timings_ms"] = {{"driver", r.driver_ms},
                     {"combine", r.combine_ms},
                     {"intermediate_reduce", r.intermediate_reduce_ms},
                     {"reduce", r.reduce_ms},
                     {"total", r.total_ms},
                     {"driver_wfcmpb_race", r.t_wfcmpb_s * 1000.0},
                     {"driver_fcm_race", r.t_fcm_s * 1000.0}};
  j["iterations"] = {{"driver_wfcmpb", r.driver_wfcmpb_iterations},
                     {"driver_fcm", r.driver_fcm_iterations},
                     {"combiners", r.combiner_iterations},
                     {"combiners_total", r.combiner_iterations_total},
                     {"intermediate_reducers", r.intermediate_reducer_iterations},
                     {"reducer", r.reducer_iterations}};
  j["stages"] = {{"records", r.records},
                 {"partitions", r.partitions},
                 {"partitions_clamped", r.partitions_clamped},
                 {"sample_size", r.sample_size},
                 {"block_size", r.block_size},
                 {"pooled_centers", r.pooled_centers},
                 {"hierarchical", r.hierarchical},
                 {"reduce_groups", r.reduce_groups},
                 {"kernels", r.kernels}};
  j["config"] = config_echo;
  return j;
}

void write_model(std::ostream& out, const ClusterModel& model, const nlohmann::json& config_echo) {
  out << to_json(model, config_echo).dump(2) << '\n';
  if (!out) throw Error("failed writing model file");
}

LoadedModel read_model(std::istream& in) {
  LoadedModel model;
  try {
    model.document = nlohmann::json::parse(in);
    model.centers = Matrix::from_rows(model.document.at("centers").get<std::vector<FeatureVector>>());
    model.weights = model.document.at("weights").get<std::vector<double>>();
    if (model.document.contains("config") && model.document["config"].contains("fuzzifier"))
      model.fuzzifier = model.document["config"]["fuzzifier"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed model file: ") + e.what());
  }
  if (model.centers.rows() == 0) throw InvalidInput("model file holds no centers");
  return model;
}

}  // namespace pfcm
