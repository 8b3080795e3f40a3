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
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pfcm/matrix.hpp"
#include "pfcm/solvers.hpp"

// Three-stage partitioned clustering: a driver clusters a random sample and
// picks the combiner solver, combiners cluster disjoint partitions in
// parallel and emit weighted centers, and a reducer merges the weighted
// centers with wfcm.
namespace pfcm {

/// Time source for the driver's solver race.
///
/// The driver calls now() before and after each timed solve and reports the
/// solve's work through charge() in between.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now() = 0;  ///< seconds
  virtual void charge(std::uint64_t /*evaluations*/) {}
};

/// Monotonic wall clock.
class SteadyClock final : public Clock {
 public:
  double now() override;
};

/// Deterministic clock that advances only by charged work, at a nominal cost
/// per point-to-center membership evaluation. Makes the solver choice
/// reproducible.
class WorkClock final : public Clock {
 public:
  explicit WorkClock(double seconds_per_evaluation = 1e-8)
      : seconds_per_evaluation_(seconds_per_evaluation) {}
  double now() override {
    return static_cast<double>(evaluations_) * seconds_per_evaluation_;
  }
  void charge(std::uint64_t evaluations) override { evaluations_ += evaluations; }

 private:
  double seconds_per_evaluation_;
  std::uint64_t evaluations_ = 0;
};

/// Write-once store through which the driver hands seed centers to every
/// combiner. Readers share one immutable copy.
class SeedStore {
 public:
  /// Throws InvalidInput when called twice.
  void publish(Matrix centers);
  /// Null until published.
  std::shared_ptr<const Matrix> get() const;

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const Matrix> centers_;
};

/// Solver selected for the combiners.
enum class CombinerSolver : int { kBlockProgressive = 0, kFast = 1 };

struct DriverDecision {
  CombinerSolver flag = CombinerSolver::kBlockProgressive;
  Matrix seed_centers;      ///< empty: combiners pick random seeds
  double t_wfcmpb = 0.0;    ///< seconds
  double t_fcm = 0.0;       ///< seconds
  std::size_t sample_size = 0;
  std::size_t wfcmpb_iterations = 0;
  std::size_t fcm_iterations = 0;
};

struct CombinerOutput {
  std::size_t source_partition = 0;
  Matrix centers;
  std::vector<double> weights;
  std::size_t iterations = 0;
  bool passthrough = false;  ///< partition smaller than c_intermediate
};

struct StageReport {
  std::size_t records = 0;
  std::size_t partitions = 0;
  bool partitions_clamped = false;
  std::size_t sample_size = 0;
  std::size_t block_size = 0;
  int flag = 0;
  double t_wfcmpb_s = 0.0;
  double t_fcm_s = 0.0;
  std::size_t driver_wfcmpb_iterations = 0;
  std::size_t driver_fcm_iterations = 0;
  std::vector<std::size_t> combiner_iterations;  ///< by partition index
  std::size_t combiner_iterations_total = 0;
  std::size_t pooled_centers = 0;
  bool hierarchical = false;
  std::size_t reduce_groups = 0;
  std::size_t intermediate_reducer_iterations = 0;
  std::size_t reducer_iterations = 0;
  double driver_ms = 0.0;
  double combine_ms = 0.0;
  double intermediate_reduce_ms = 0.0;
  double reduce_ms = 0.0;
  double total_ms = 0.0;
  std::string kernels;
};

struct ClusterModel {
  Matrix final_centers;
  std::vector<double> final_weights;
  StageReport report;
  /// Objective of the final centers over the validation sample (the driver
  /// sample); run_reducer alone reports it over the pooled centers.
  double objective = 0.0;
  bool converged = false;
};

/// How the combiner solver is chosen.
enum class FlagPolicy { kTimed, kForceFast, kForceBlockProgressive };

struct PipelineConfig {
  /// c, c_intermediate, m, epsilon (the reducer epsilon), max_iterations, seed.
  FcmParams params;
  double driver_epsilon = 0.0;    ///< 0: params.epsilon / 100
  double combiner_epsilon = 1e-6;
  std::size_t partitions = 1;
  std::size_t parallelism = 1;
  std::size_t sample_size = 0;    ///< 0: Parker-Hall default
  double v_alpha = 1.27359;
  double relative_difference = 0.10;
  std::size_t block_size = 0;     ///< 0: Parker-Hall size at r = 0.20
  std::size_t reduce_groups = 4;
  bool deterministic = true;      ///< order combiner outputs by partition
  bool driver_seeding = true;     ///< false: combiners start from random points
  FlagPolicy flag_policy = FlagPolicy::kTimed;

  void validate() const;
  double effective_driver_epsilon() const;
  std::size_t effective_sample_size(std::size_t records) const;
  std::size_t effective_block_size() const;
};

struct PipelineHooks {
  /// Used for the driver race. Defaults to WorkClock in deterministic mode
  /// and SteadyClock otherwise.
  Clock* clock = nullptr;
  /// One line per completed stage.
  std::function<void(const std::string&)> on_event;
  /// Checked between stages and before each combiner task.
  const std::atomic<bool>* cancel = nullptr;
};

/// Clusters `sample` with wfcmpb and with fcm_fast from the same random
/// seeds and keeps the faster solver's centers: flag = fast iff
/// t_wfcmpb - t_fcm > 0. Publishes the seeds to `store` when given.
/// `params.c_intermediate` sets the cluster count.
DriverDecision run_driver(PointsView sample, const FcmParams& params, double driver_epsilon,
                          std::size_t block_size, Clock& clock, SeedStore* store = nullptr,
                          FlagPolicy policy = FlagPolicy::kTimed);

/// Clusters one partition into params.c_intermediate weighted centers with the
/// solver the driver selected, using params.epsilon. Partitions with fewer
/// than c_intermediate points pass through with unit weights.
CombinerOutput run_combiner(PointsView partition, std::size_t partition_index,
                            const DriverDecision& decision, const FcmParams& params,
                            std::size_t block_size);

/// Pools the outputs in the given order, drops zero-weight centers and merges
/// them into params.c centers with wfcm seeded by the first c centers of the
/// first output.
ClusterModel run_reducer(const std::vector<CombinerOutput>& outputs, const FcmParams& params);

/// End to end: sample, driver, partitioned combiners, (hierarchical)
/// reduction.
ClusterModel run_pipeline(PointsView dataset, const PipelineConfig& config,
                          const PipelineHooks& hooks = {});

/// Model file: JSON with full-precision centers.
nlohmann::json to_json(const ClusterModel& model, const nlohmann::json& config_echo);
void write_model(std::ostream& out, const ClusterModel& model, const nlohmann::json& config_echo);

struct LoadedModel {
  Matrix centers;
  std::vector<double> weights;
  double fuzzifier = 2.0;
  nlohmann::json document;
};
LoadedModel read_model(std::istream& in);

}  // namespace pfcm
