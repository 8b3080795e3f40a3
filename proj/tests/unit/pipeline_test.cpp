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

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfcm/error.hpp"
#include "pfcm/ingest.hpp"
#include "pfcm/metrics.hpp"
#include "pfcm/numeric.hpp"
#include "pfcm/pipeline.hpp"
#include "pfcm/sampling.hpp"
#include "pfcm/seed.hpp"
#include "pfcm/solvers.hpp"
#include "pfcm/synthetic.hpp"
#include "pfcm/worker_pool.hpp"
#include "test_util.hpp"

namespace pfcm {
namespace {

// Replays a fixed list of readings.
class ScriptedClock final : public Clock {
 public:
  explicit ScriptedClock(std::deque<double> readings) : readings_(std::move(readings)) {}
  double now() override {
    const double t = readings_.front();
    readings_.pop_front();
    return t;
  }

 private:
  std::deque<double> readings_;
};

FcmParams params(std::size_t c, double eps = 5e-7) {
  FcmParams p;
  p.c = c;
  p.c_intermediate = c;
  p.epsilon = eps;
  return p;
}

Matrix line(std::initializer_list<double> xs) {
  Matrix out;
  for (double x : xs) out.append(std::span<const double>(&x, 1));
  return out;
}

const Matrix& corners_data(std::size_t n = 100000) {
  static const LabeledPoints data = sample_mixture(four_corners(), 100000, 2024);
  static Matrix head;
  if (n == 100000) return data.points;
  head = Matrix(data.points.view().slice(0, n));
  return head;
}

PipelineConfig corners_config(std::size_t partitions) {
  PipelineConfig cfg;
  cfg.params = params(4);
  cfg.partitions = partitions;
  cfg.parallelism = 4;
  return cfg;
}

TEST(Driver, SlowerBlockProgressiveSelectsFast) {
  std::mt19937_64 rng(1);
  const Matrix sample = testing::random_points(200, 2, rng);
  ScriptedClock clock({0.0, 5.0, 5.0, 8.0});
  SeedStore store;
  const auto p = params(3);
  const auto d = run_driver(sample, p, 1e-9, 50, clock, &store);
  EXPECT_EQ(d.flag, CombinerSolver::kFast);
  EXPECT_DOUBLE_EQ(d.t_wfcmpb, 5.0);
  EXPECT_DOUBLE_EQ(d.t_fcm, 3.0);
  EXPECT_EQ(d.sample_size, 200u);

  FcmParams q = p;
  q.epsilon = 1e-9;
  q.compute_objective = false;
  const Matrix init = random_init(sample, 3, derive_seed(p.seed, "driver-init"));
  EXPECT_EQ(d.seed_centers, fcm_fast(sample, init, q).centers);
  ASSERT_TRUE(store.get());
  EXPECT_EQ(*store.get(), d.seed_centers);
  EXPECT_THROW(store.publish(Matrix{{1.0}}), InvalidInput);
}

TEST(Driver, TieSelectsBlockProgressive) {
  std::mt19937_64 rng(2);
  const Matrix sample = testing::random_points(200, 2, rng);
  ScriptedClock clock({0.0, 3.0, 3.0, 6.0});
  const auto p = params(3);
  const auto d = run_driver(sample, p, 1e-9, 50, clock);
  EXPECT_EQ(d.flag, CombinerSolver::kBlockProgressive);
  FcmParams q = p;
  q.epsilon = 1e-9;
  q.compute_objective = false;
  const Matrix init = random_init(sample, 3, derive_seed(p.seed, "driver-init"));
  EXPECT_EQ(d.seed_centers, wfcmpb(sample, init, q, 50).centers);
}

TEST(Driver, ForcedPoliciesOverrideTimings) {
  std::mt19937_64 rng(3);
  const Matrix sample = testing::random_points(100, 2, rng);
  ScriptedClock a({0.0, 1.0, 1.0, 9.0});
  EXPECT_EQ(run_driver(sample, params(2), 1e-9, 50, a, nullptr, FlagPolicy::kForceFast).flag,
            CombinerSolver::kFast);
  ScriptedClock b({0.0, 9.0, 9.0, 10.0});
  EXPECT_EQ(run_driver(sample, params(2), 1e-9, 50, b, nullptr,
                       FlagPolicy::kForceBlockProgressive)
                .flag,
            CombinerSolver::kBlockProgressive);
}

TEST(Driver, WorkClockIsReproducible) {
  std::mt19937_64 rng(4);
  const Matrix sample = testing::random_points(500, 3, rng);
  WorkClock c1, c2;
  const auto a = run_driver(sample, params(3), 1e-9, 100, c1);
  const auto b = run_driver(sample, params(3), 1e-9, 100, c2);
  EXPECT_EQ(a.flag, b.flag);
  EXPECT_EQ(a.t_fcm, b.t_fcm);
  EXPECT_GT(a.t_fcm, 0.0);
  EXPECT_EQ(a.seed_centers, b.seed_centers);
}

TEST(Driver, Errors) {
  WorkClock clock;
  EXPECT_THROW(run_driver(line({0.0, 1.0}), params(3), 1e-9, 3, clock), InvalidInput);
  EXPECT_THROW(run_driver(line({0.0, 1.0, 2.0}), params(2), 0.0, 3, clock), ParameterError);
}

TEST(Driver, SeedsLandOnMixtureMeans) {
  const LabeledPoints data = sample_mixture(four_corners(), 3184, 77);
  const Matrix truth = four_corners().means;
  for (auto policy : {FlagPolicy::kForceFast, FlagPolicy::kForceBlockProgressive}) {
    WorkClock clock;
    const auto d = run_driver(data.points, params(4), 5e-9, 796, clock, nullptr, policy);
    EXPECT_LE(testing::alignment_error(d.seed_centers, truth), 0.1);
    const auto oracle = fcm_naive(data.points, d.seed_centers, params(4, 1e-12));
    EXPECT_LE(testing::alignment_error(d.seed_centers, oracle.centers), 0.1);
  }
}

TEST(Combiner, FixedPoint) {
  DriverDecision d;
  d.flag = CombinerSolver::kFast;
  d.seed_centers = line({0.0, 2.0});
  const auto out = run_combiner(line({0.0, 2.0}), 0, d, params(2), 10);
  EXPECT_EQ(out.centers, line({0.0, 2.0}));
  EXPECT_EQ(out.weights, (std::vector<double>{1.0, 1.0}));
  d.flag = CombinerSolver::kBlockProgressive;
  const auto pb = run_combiner(line({0.0, 2.0}), 0, d, params(2), 10);
  EXPECT_EQ(pb.centers, line({0.0, 2.0}));
}

TEST(Combiner, SingleGaussianStaysInBoxAndMassIsBounded) {
  MixtureSpec spec{Matrix{{5.0, 5.0}}, 1.0};
  const LabeledPoints data = sample_mixture(spec, 1000, 5);
  for (auto flag : {CombinerSolver::kFast, CombinerSolver::kBlockProgressive}) {
    DriverDecision d;
    d.flag = flag;
    d.seed_centers = Matrix{{4.0, 4.0}, {6.0, 6.0}};
    const auto out = run_combiner(data.points, 3, d, params(2), 200);
    EXPECT_EQ(out.source_partition, 3u);
    ASSERT_EQ(out.centers.rows(), 2u);
    double lo[2] = {1e9, 1e9}, hi[2] = {-1e9, -1e9};
    for (std::size_t k = 0; k < 1000; ++k)
      for (std::size_t j = 0; j < 2; ++j) {
        lo[j] = std::min(lo[j], data.points(k, j));
        hi[j] = std::max(hi[j], data.points(k, j));
      }
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_GE(out.centers(i, j), lo[j]);
        EXPECT_LE(out.centers(i, j), hi[j]);
      }
    EXPECT_LE(out.weights[0] + out.weights[1], 1000.0);
    EXPECT_GE(out.weights[0], 0.0);
  }
}

TEST(Combiner, EqualPartitionsFromOneDistributionAgree) {
  const MixtureSpec spec = four_corners();
  DriverDecision d;
  d.flag = CombinerSolver::kFast;
  d.seed_centers = Matrix{{1.0, 1.0}, {9.0, 1.0}, {1.0, 9.0}, {9.0, 9.0}};
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = sample_mixture(spec, 2000, 100 + trial);
    const auto b = sample_mixture(spec, 2000, 200 + trial);
    const auto oa = run_combiner(a.points, 0, d, params(4, 1e-6), 500);
    const auto ob = run_combiner(b.points, 1, d, params(4, 1e-6), 500);
    ASSERT_LE(testing::alignment_error(oa.centers, ob.centers), 0.1) << "trial " << trial;
  }
}

TEST(Combiner, SmallPartitionPassesThrough) {
  DriverDecision d;
  d.seed_centers = line({0.0, 1.0, 2.0});
  const auto out = run_combiner(line({7.0, 8.0}), 4, d, params(3), 10);
  EXPECT_TRUE(out.passthrough);
  EXPECT_EQ(out.centers, line({7.0, 8.0}));
  EXPECT_EQ(out.weights, (std::vector<double>{1.0, 1.0}));
}

TEST(Combiner, RandomSeedsWhenDecisionIsEmpty) {
  std::mt19937_64 rng(6);
  const Matrix pts = testing::random_points(100, 2, rng);
  DriverDecision d;
  d.flag = CombinerSolver::kFast;
  const auto a = run_combiner(pts, 0, d, params(3), 50);
  const auto b = run_combiner(pts, 0, d, params(3), 50);
  EXPECT_EQ(a.centers, b.centers);
  EXPECT_GT(a.iterations, 0u);
}

TEST(Combiner, Errors) {
  DriverDecision d;
  d.seed_centers = line({0.0, 1.0});
  EXPECT_THROW(run_combiner(Matrix{{0.0, 0.0}, {1.0, 1.0}}, 0, d, params(2), 10), InvalidInput);
  EXPECT_THROW(run_combiner(Matrix(0, 1), 0, d, params(2), 10), InvalidInput);
}

TEST(Reducer, IdenticalOutputsAreAFixedPoint) {
  const CombinerOutput o{0, line({0.0, 2.0}), {5.0, 5.0}, 1, false};
  auto o2 = o;
  o2.source_partition = 1;
  const auto model = run_reducer({o, o2}, params(2));
  EXPECT_EQ(model.final_centers, line({0.0, 2.0}));
  EXPECT_EQ(model.final_weights, (std::vector<double>{10.0, 10.0}));
}

TEST(Reducer, WeightedMergeFixture) {
  const CombinerOutput a{0, line({0.0, 10.0}), {9.0, 1.0}, 1, false};
  const CombinerOutput b{1, line({0.2, 10.2}), {9.0, 1.0}, 1, false};
  const auto model = run_reducer({a, b}, params(2));
  // Independent high-precision run of the same weighted iteration.
  EXPECT_NEAR(model.final_centers(0, 0), 0.099999594444818244, 1e-9);
  EXPECT_NEAR(model.final_centers(1, 0), 10.09999948096361, 1e-9);
  EXPECT_NEAR(model.final_weights[0], 17.99639938661273, 1e-9);
  EXPECT_NEAR(model.final_weights[1], 1.999600130815041, 1e-9);
  EXPECT_NEAR(model.final_centers(0, 0), 0.1, 1e-6);
  EXPECT_NEAR(model.final_centers(1, 0), 10.1, 1e-6);
  EXPECT_EQ(model.report.reducer_iterations, 2u);

  const std::vector<double> w{9.0, 1.0, 9.0, 1.0};
  const auto direct = wfcm(line({0.0, 10.0, 0.2, 10.2}), w, line({0.0, 10.0}), params(2));
  EXPECT_EQ(model.final_centers, direct.centers);
}

TEST(Reducer, SingleOutputIsIdempotent) {
  std::mt19937_64 rng(7);
  const Matrix pts = testing::random_points(300, 2, rng);
  DriverDecision d;
  d.flag = CombinerSolver::kFast;
  d.seed_centers = random_init(pts, 3, 1);
  const auto out = run_combiner(pts, 0, d, params(3), 100);
  const auto model = run_reducer({out}, params(3));
  EXPECT_LE(testing::max_abs_diff(model.final_centers, out.centers), 1e-9);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_NEAR(model.final_weights[i], out.weights[i], 1e-9 * out.weights[i]);
}

TEST(Reducer, DropsZeroWeightsAndRejectsDegeneratePools) {
  const CombinerOutput a{0, line({0.0, 5.0, 10.0}), {3.0, 0.0, 3.0}, 1, false};
  const auto model = run_reducer({a}, params(2));
  EXPECT_EQ(model.report.pooled_centers, 2u);
  EXPECT_EQ(model.final_centers, line({0.0, 10.0}));

  const CombinerOutput thin{0, line({0.0, 5.0}), {3.0, 0.0}, 1, false};
  EXPECT_THROW(run_reducer({thin}, params(2)), DegenerateInput);
  EXPECT_THROW(run_reducer({}, params(2)), InvalidInput);
}

TEST(Reducer, MassIsConserved) {
  const Matrix& data = corners_data(20000);
  DriverDecision d;
  d.flag = CombinerSolver::kFast;
  d.seed_centers = Matrix{{1.0, 1.0}, {9.0, 1.0}, {1.0, 9.0}, {9.0, 9.0}};
  std::vector<CombinerOutput> outs;
  const auto plan = plan_partitions(data.rows(), 4);
  for (std::size_t p = 0; p < 4; ++p)
    outs.push_back(run_combiner(data.view().slice(plan.ranges[p].first, plan.ranges[p].second),
                                p, d, params(4, 1e-6), 1000));
  Matrix pool(0, 2);
  std::vector<double> w;
  for (const auto& o : outs)
    for (std::size_t i = 0; i < 4; ++i) {
      pool.append(o.centers.row(i));
      w.push_back(o.weights[i]);
    }
  const auto model = run_reducer(outs, params(4, 1e-12));
  const double pooled = std::accumulate(w.begin(), w.end(), 0.0);
  const double final_mass =
      std::accumulate(model.final_weights.begin(), model.final_weights.end(), 0.0);
  EXPECT_LE(final_mass, pooled * (1 + 1e-12));

  // Exact identity: final mass = sum_k w_k sum_i term_ik.
  double expected = 0.0, min_top = 1.0;
  for (std::size_t k = 0; k < pool.rows(); ++k) {
    const auto t = membership_terms(pool.row(k), model.final_centers, 2.0);
    expected += w[k] * std::accumulate(t.begin(), t.end(), 0.0);
    min_top = std::min(min_top, std::sqrt(*std::max_element(t.begin(), t.end())));
  }
  EXPECT_NEAR(final_mass, expected, 1e-9 * pooled);
  // Crisp separation here, so nothing is lost.
  ASSERT_GE(min_top, 0.99);
  EXPECT_NEAR(final_mass, pooled, 1e-6 * pooled);
}

TEST(Pipeline, FourCornersRecovered) {
  const auto model = run_pipeline(corners_data(), corners_config(8));
  EXPECT_EQ(model.final_centers.rows(), 4u);
  EXPECT_LE(testing::alignment_error(model.final_centers, four_corners().means), 0.05);
  const auto& r = model.report;
  EXPECT_EQ(r.records, 100000u);
  EXPECT_EQ(r.partitions, 8u);
  EXPECT_EQ(r.combiner_iterations.size(), 8u);
  EXPECT_EQ(r.pooled_centers, 32u);
  EXPECT_FALSE(r.hierarchical);
  EXPECT_GE(r.driver_ms, 0.0);
  EXPECT_LE(r.driver_ms + r.combine_ms + r.intermediate_reduce_ms + r.reduce_ms,
            r.total_ms + 1e-9);
  EXPECT_GT(model.objective, 0.0);
}

TEST(Pipeline, DeterministicRunsAreBitIdentical) {
  const auto a = run_pipeline(corners_data(30000), corners_config(8));
  const auto b = run_pipeline(corners_data(30000), corners_config(8));
  EXPECT_EQ(a.final_centers, b.final_centers);
  EXPECT_EQ(a.final_weights, b.final_weights);
  EXPECT_EQ(a.report.flag, b.report.flag);
}

TEST(Pipeline, ParallelismDoesNotChangeResult) {
  auto cfg = corners_config(8);
  cfg.parallelism = 1;
  const auto a = run_pipeline(corners_data(30000), cfg);
  cfg.parallelism = 8;
  const auto b = run_pipeline(corners_data(30000), cfg);
  EXPECT_EQ(a.final_centers, b.final_centers);
}

TEST(Pipeline, OnePartitionEqualsComposition) {
  const Matrix& data = corners_data(20000);
  auto cfg = corners_config(1);
  cfg.parallelism = 1;
  const auto model = run_pipeline(data, cfg);

  const Matrix sample = reservoir_sample(data, cfg.effective_sample_size(data.rows()),
                                         derive_seed(cfg.params.seed, "driver-sample"));
  WorkClock clock;
  const auto decision = run_driver(sample, cfg.params, cfg.effective_driver_epsilon(),
                                   cfg.effective_block_size(), clock);
  FcmParams cp = cfg.params;
  cp.epsilon = cfg.combiner_epsilon;
  const auto out = run_combiner(data, 0, decision, cp, cfg.effective_block_size());
  const auto direct = run_reducer({out}, cfg.params);
  EXPECT_EQ(model.final_centers, direct.final_centers);
  EXPECT_EQ(model.final_weights, direct.final_weights);
}

TEST(Pipeline, PassthroughPartitionsAndClampWarning) {
  const Matrix data = line({0.0, 0.1, 5.0, 5.1, 9.9});
  PipelineConfig cfg;
  cfg.params = params(2);
  cfg.partitions = 8;
  std::vector<std::string> events;
  PipelineHooks hooks;
  hooks.on_event = [&](const std::string& e) { events.push_back(e); };
  const auto model = run_pipeline(data, cfg, hooks);
  EXPECT_EQ(model.report.partitions, 5u);
  EXPECT_TRUE(model.report.partitions_clamped);
  EXPECT_EQ(model.report.pooled_centers, 5u);
  EXPECT_EQ(model.final_centers.rows(), 2u);
  bool warned = false;
  std::size_t stages = 0;
  for (const auto& e : events) {
    warned |= e.starts_with("warning:");
    stages += e.starts_with("stage ");
  }
  EXPECT_TRUE(warned);
  EXPECT_EQ(stages, 3u);
}

TEST(Pipeline, FreeOrderKeepsQuality) {
  auto cfg = corners_config(8);
  cfg.deterministic = false;
  cfg.parallelism = 4;
  const auto model = run_pipeline(corners_data(30000), cfg);
  EXPECT_LE(testing::alignment_error(model.final_centers, four_corners().means), 0.05);
}

TEST(Pipeline, HierarchicalReduce) {
  auto cfg = corners_config(64);
  cfg.reduce_groups = 2;  // threshold 10 * 4 * 2 = 80 < 256 pooled
  const auto model = run_pipeline(corners_data(), cfg);
  EXPECT_TRUE(model.report.hierarchical);
  EXPECT_EQ(model.report.reduce_groups, 2u);
  EXPECT_EQ(model.report.pooled_centers, 256u);
  EXPECT_LE(testing::alignment_error(model.final_centers, four_corners().means), 0.05);

  cfg.reduce_groups = 8;  // threshold 320
  EXPECT_FALSE(run_pipeline(corners_data(), cfg).report.hierarchical);
}

TEST(Pipeline, PartitionCountRobustness) {
  std::vector<Matrix> found;
  for (std::size_t p : {2u, 4u, 8u, 16u})
    found.push_back(run_pipeline(corners_data(), corners_config(p)).final_centers);
  for (std::size_t i = 0; i < found.size(); ++i)
    for (std::size_t j = i + 1; j < found.size(); ++j)
      EXPECT_LE(testing::alignment_error(found[i], found[j]), 0.05);
}

TEST(Pipeline, FlagPathsAgree) {
  auto cfg = corners_config(8);
  cfg.flag_policy = FlagPolicy::kForceFast;
  const auto fast = run_pipeline(corners_data(), cfg);
  EXPECT_EQ(fast.report.flag, 1);
  cfg.flag_policy = FlagPolicy::kForceBlockProgressive;
  const auto pb = run_pipeline(corners_data(), cfg);
  EXPECT_EQ(pb.report.flag, 0);
  EXPECT_LE(testing::alignment_error(fast.final_centers, pb.final_centers), 0.05);
}

// Both arms run the same combiner solver; random seeding has no race to pick
// one.
TEST(Pipeline, DriverSeedingCutsCombinerIterations) {
  int wins = 0;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    auto cfg = corners_config(8);
    cfg.params.seed = 1000 + trial;
    cfg.flag_policy = FlagPolicy::kForceFast;
    const auto seeded = run_pipeline(corners_data(), cfg);
    cfg.driver_seeding = false;
    const auto random = run_pipeline(corners_data(), cfg);
    wins += seeded.report.combiner_iterations_total < random.report.combiner_iterations_total;
  }
  EXPECT_GE(wins, 9);
}

TEST(Pipeline, DriverSeedingNeverHurtsBlockProgressive) {
  auto cfg = corners_config(8);
  cfg.flag_policy = FlagPolicy::kForceBlockProgressive;
  const auto seeded = run_pipeline(corners_data(), cfg);
  cfg.driver_seeding = false;
  const auto random = run_pipeline(corners_data(), cfg);
  EXPECT_LE(seeded.report.combiner_iterations_total, random.report.combiner_iterations_total);
}

TEST(Pipeline, IntermediateClustersAboveFinal) {
  auto cfg = corners_config(4);
  cfg.params.c = 2;
  cfg.params.c_intermediate = 4;
  const auto model = run_pipeline(corners_data(20000), cfg);
  EXPECT_EQ(model.final_centers.rows(), 2u);
  EXPECT_EQ(model.report.pooled_centers, 16u);
}

TEST(Pipeline, ErrorsAreTaggedWithStage) {
  Matrix bad = corners_data(1000);
  bad(500, 0) = std::nan("");
  auto cfg = corners_config(4);
  cfg.sample_size = 10;  // driver sample likely misses the bad row
  try {
    run_pipeline(bad, cfg);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_TRUE(e.stage() == "driver" || e.stage() == "combine") << e.what();
    if (e.stage() == "combine") EXPECT_EQ(e.partition(), 2u);
  }
  cfg.partitions = 0;
  EXPECT_THROW(run_pipeline(corners_data(1000), cfg), ParameterError);
}

TEST(Pipeline, CancelledBeforeStart) {
  std::atomic<bool> cancel{true};
  PipelineHooks hooks;
  hooks.cancel = &cancel;
  EXPECT_THROW(run_pipeline(corners_data(1000), corners_config(2), hooks), Cancelled);
}

TEST(ModelFile, RoundTripKeepsFullPrecision) {
  const auto model = run_pipeline(corners_data(5000), corners_config(2));
  std::stringstream buf;
  write_model(buf, model, {{"fuzzifier", 2.0}, {"clusters", 4}});
  const auto loaded = read_model(buf);
  EXPECT_EQ(loaded.centers, model.final_centers);
  EXPECT_EQ(loaded.weights, model.final_weights);
  EXPECT_EQ(loaded.fuzzifier, 2.0);
  EXPECT_EQ(loaded.document["format"], "pfcm-model/1");
  EXPECT_EQ(loaded.document["iterations"]["combiners"].size(), 2u);

  std::istringstream junk("{\"centers\": 3}");
  EXPECT_THROW(read_model(junk), InvalidInput);
}

TEST(WorkerPool, RunsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  const auto failure = parallel_for(1000, 8, [&](std::size_t i) { ++hits[i]; });
  EXPECT_FALSE(failure);
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(WorkerPool, ReportsLowestFailingIndex) {
  const auto failure = parallel_for(100, 1, [](std::size_t i) {
    if (i == 7 || i == 30) throw std::runtime_error("boom");
  });
  ASSERT_TRUE(failure);
  EXPECT_EQ(failure->index, 7u);
  std::atomic<bool> cancel{true};
  std::atomic<int> ran{0};
  EXPECT_FALSE(parallel_for(100, 4, [&](std::size_t) { ++ran; }, &cancel));
  EXPECT_EQ(ran.load(), 0);
}

}  // namespace
}  // namespace pfcm
