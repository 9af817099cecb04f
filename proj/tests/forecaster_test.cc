// Copyright 2026 The omnipred Authors.
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

#include "omnipred/forecaster.h"

#include <gtest/gtest.h>

#include <cmath>

#include "omnipred/config.h"
#include "omnipred/errors.h"
#include "omnipred/harness.h"
#include "omnipred/metrics.h"

namespace omnipred {
namespace {

TEST(ExpertDistribution, SinglePastRound) {
  WeightState w(1, 1, 1.0);
  w.add(0, 0, 0.5);
  const ExpertDistribution q = compute_expert_distribution(w);
  EXPECT_NEAR(q.weight(0, 0, +1), 1.0 / (1.0 + std::exp(-0.5)), 1e-12);
  EXPECT_NEAR(q.weight(0, 0, +1), 0.6225, 5e-5);
  EXPECT_NEAR(q.weight(0, 0, -1), 0.3775, 5e-5);
}

TEST(ExpertDistribution, UniformWithoutHistory) {
  const ExpertDistribution q = compute_expert_distribution(WeightState(3, 2, 0.7));
  for (std::size_t e = 0; e < 3; ++e) {
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_DOUBLE_EQ(q.weight(e, i, +1), 1.0 / 12);
      EXPECT_DOUBLE_EQ(q.weight(e, i, -1), 1.0 / 12);
    }
  }
}

TEST(ExpertDistribution, SurvivesHugePayoffs) {
  WeightState w(2, 1, 1.0);
  w.add(0, 0, 5000.0);
  const ExpertDistribution q = compute_expert_distribution(w);
  EXPECT_NEAR(q.weight(0, 0, +1), 1.0, 1e-12);
  EXPECT_TRUE(std::isfinite(q.weight(1, 0, -1)));
}

TEST(ExpertDistribution, EqualPayoffsGiveEqualWeightsAcrossEvents) {
  WeightState w(4, 1, 0.3);
  for (std::size_t e = 0; e < 4; ++e) w.add(e, 0, 2.5);
  const ExpertDistribution q = compute_expert_distribution(w);
  for (std::size_t e = 1; e < 4; ++e) {
    EXPECT_DOUBLE_EQ(q.weight(e, 0, +1), q.weight(0, 0, +1));
    EXPECT_DOUBLE_EQ(q.weight(e, 0, -1), q.weight(0, 0, -1));
  }
}

TEST(DefaultLearningRate, Formula) {
  EXPECT_DOUBLE_EQ(default_learning_rate(100, 2, 5), std::sqrt(8 * std::log(20.0) / 100));
  EXPECT_THROW(default_learning_rate(0, 1, 1), InvalidArgument);
}

TEST(SolveRoundMinmax, NoActiveEvents) {
  const GridSpec grid(1, 0.5);
  const std::vector<Vector> zero(3, Vector{0.0});
  const MinmaxSolution s = solve_round_minmax(grid, zero);
  EXPECT_DOUBLE_EQ(s.game_value, 0.0);
  ASSERT_EQ(s.psi.support.size(), 1u);
  EXPECT_EQ(s.psi.support[0], (Vector{0.0}));
}

TEST(SolveRoundMinmax, SymmetricWeightsCancel) {
  const GridSpec grid(1, 0.5);
  const std::vector<ActiveEventWeights> events{{{0.5}, {0.5}}};
  const MinmaxSolution s =
      solve_round_minmax(events, [](std::size_t, std::size_t) { return true; }, grid);
  EXPECT_NEAR(s.game_value, 0.0, 1e-12);
}

// E1 = 1[p >= 0.5] with (E1,+) = 0.5, E2 = 1[p < 0.5] with (E2,-) = 0.5.
TEST(SolveRoundMinmax, WorkedInstanceNeedsRandomization) {
  const GridSpec grid(1, 0.5);
  const std::vector<ActiveEventWeights> events{{{0.5}, {0.0}}, {{0.0}, {0.5}}};
  auto fires = [&](std::size_t e, std::size_t k) {
    return (grid.point(k)[0] >= 0.5) == (e == 0);
  };
  const MinmaxSolution s = solve_round_minmax(events, fires, grid);
  EXPECT_NEAR(s.game_value, 0.125, 1e-9);
  Vector weights(3, 0.0);
  for (std::size_t k = 0; k < s.support_indices.size(); ++k) {
    weights[s.support_indices[k]] = s.psi.probs[k];
  }
  EXPECT_NEAR(weights[0], 0.5, 1e-9);
  EXPECT_NEAR(weights[1], 0.5, 1e-9);
  EXPECT_NEAR(weights[2], 0.0, 1e-9);

  const std::vector<Vector> coefficients{{-0.5}, {0.5}, {0.5}};
  for (std::size_t k = 0; k < 3; ++k) {
    Vector pure(3, 0.0);
    pure[k] = 1.0;
    EXPECT_GE(minmax_objective(grid, coefficients, pure), 0.25 - 1e-12);
  }
}

TEST(SolveRoundMinmax, PinnedCoordinateContributesNothing) {
  const GridSpec grid(1, 0.5, true);
  std::vector<Vector> coefficients(3, Vector{0.0, 0.7});
  EXPECT_NEAR(solve_round_minmax(grid, coefficients).game_value, 0.0, 1e-12);
}

TEST(SolveRoundMinmax, ValueBoundOnRandomCoefficients) {
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t free = 1 + uniform_index(rng, 2);
    const GridSpec grid(free, trial % 2 == 0 ? 0.25 : 0.125, trial % 3 == 0);
    // Net weights of a distribution over experts: l1 mass per point <= 1.
    std::vector<Vector> coefficients(grid.size(), Vector(grid.dim(), 0.0));
    for (auto& row : coefficients) {
      double mass = 0.0;
      for (double& v : row) {
        v = 2 * uniform01(rng) - 1;
        mass += std::abs(v);
      }
      for (double& v : row) v /= std::max(mass, 1.0);
    }
    EXPECT_LE(solve_round_minmax(grid, coefficients).game_value,
              grid.spacing() / 2 + kValueBoundSlack);
  }
}

TEST(SamplePrediction, PointMassAndFrequencies) {
  Rng rng(51);
  const auto point = PredictionDistribution::PointMass({0.25});
  for (int i = 0; i < 20; ++i) EXPECT_EQ(sample_prediction(point, rng), (Vector{0.25}));

  const PredictionDistribution half{{{0.0}, {0.5}}, {0.5, 0.5}};
  int zeros = 0;
  for (int i = 0; i < 10000; ++i) zeros += sample_prediction(half, rng)[0] == 0.0;
  EXPECT_NEAR(zeros / 10000.0, 0.5, 0.02);
}

TEST(SamplePrediction, SeededSequenceIsStable) {
  const PredictionDistribution psi{{{0.0}, {0.5}, {1.0}}, {0.2, 0.3, 0.5}};
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_prediction(psi, a), sample_prediction(psi, b));
}

TEST(RecordOutcome, Examples) {
  WeightState w(1, 1, 1.0);
  const std::vector<SupportFiring> on{{0, {1}}};
  record_outcome(w, PredictionDistribution::PointMass({0.5}), on, Vector{0.25});
  EXPECT_DOUBLE_EQ(w.cumulative(0, 0), 0.25);

  WeightState quiet(1, 1, 1.0);
  const std::vector<SupportFiring> off{{0, {0}}};
  record_outcome(quiet, PredictionDistribution::PointMass({0.5}), off, Vector{0.25});
  EXPECT_DOUBLE_EQ(quiet.cumulative(0, 0), 0.0);

  WeightState mixed(2, 1, 1.0);
  const PredictionDistribution psi{{{0.0}, {0.5}}, {0.5, 0.5}};
  const std::vector<SupportFiring> upper{{1, {0, 1}}};
  record_outcome(mixed, psi, upper, Vector{0.0});
  // psi(0.5) (0.5 - 0) = 0.25 for the (+) expert, -0.25 for (-).
  EXPECT_DOUBLE_EQ(mixed.cumulative(1, 0), 0.25);
  EXPECT_DOUBLE_EQ(mixed.cumulative(0, 0), 0.0);
  EXPECT_THROW(record_outcome(mixed, psi, upper, Vector{1.5}), InvalidArgument);
}

Forecaster tiny_forecaster(std::vector<AgentSpec> agents) {
  ForecasterOptions options;
  options.horizon = 5;
  options.sampling_seed = 3;
  return Forecaster(std::move(agents), {SubsequenceSpec::Interval(1, 5)}, GridSpec(1, 0.5),
                    options);
}

TEST(Forecaster, SingleRoundWithoutEvents) {
  Forecaster f = tiny_forecaster({});
  const RoundOutput& out = f.predict(1, 0);
  EXPECT_EQ(out.prediction, (Vector{0.0}));
  EXPECT_EQ(out.active_events, 0u);
  f.observe(Vector{0.4});
  EXPECT_EQ(f.completed_rounds(), 1u);
}

TEST(Forecaster, ProtocolOrderIsEnforced) {
  AgentSpec a;
  a.id = "a";
  a.utility = {{1.0}, {0.0}};
  Forecaster f = tiny_forecaster({a});
  EXPECT_THROW(f.observe(Vector{0.1}), ProtocolError);
  EXPECT_THROW(f.predict(2, 0), ProtocolError);
  f.predict(1, 0);
  EXPECT_THROW(f.predict(1, 0), ProtocolError);
  f.observe(Vector{0.1});
  f.predict(2, 0);
  EXPECT_THROW(f.predict(3, 0), ProtocolError);  // outcome 2 missing
  EXPECT_THROW(f.observe(Vector{2.0}), InvalidArgument);
}

RunConfig golden(std::size_t horizon, std::uint64_t seed) {
  return with_seeds(
      with_horizon(load_run_config(OMNIPRED_FIXTURE_DIR "/golden_config.json"), horizon), seed,
      seed + 1);
}

TEST(ForecasterRun, InternalPayoffsMatchRecomputedExpectation) {
  const RunConfig config = golden(200, 17);
  const RunResult result = run_experiment(config);
  ASSERT_TRUE(result.invariants_held());
  const auto agents = config.agents;
  const auto subs = materialize_subsequences(config);
  const EventRegistry reg = EventRegistry::build(agents, subs, make_rule(config));
  const auto expected =
      expected_calibration_bias(result.transcript, reg, agents, subs, make_rule(config));
  ASSERT_EQ(expected.size(), result.expected_bias.size());
  for (std::size_t e = 0; e < expected.size(); ++e) {
    EXPECT_NEAR(expected[e].bias, result.expected_bias[e], 1e-9) << "event " << e;
  }
}

TEST(ForecasterRun, RealizedBiasTracksExpectedBias) {
  const std::size_t T = 400;
  const double gap = 3.0 * std::sqrt(T * std::log(100.0));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RunConfig config = golden(T, 1000 + seed);
    const RunResult result = run_experiment(config);
    ASSERT_TRUE(result.invariants_held()) << "seed " << seed;
    const auto subs = materialize_subsequences(config);
    const DecisionRuleConfig rule = make_rule(config);
    const EventRegistry reg = EventRegistry::build(config.agents, subs, rule);
    const auto realized = calibration_bias(result.transcript, reg, config.agents, subs, rule);
    const auto expected =
        expected_calibration_bias(result.transcript, reg, config.agents, subs, rule);
    for (std::size_t e = 0; e < realized.size(); ++e) {
      for (std::size_t i = 0; i < realized[e].signed_sum.size(); ++i) {
        EXPECT_LE(std::abs(realized[e].signed_sum[i] - expected[e].signed_sum[i]), gap)
            << "seed " << seed << " event " << e;
      }
    }
  }
}

}  // namespace
}  // namespace omnipred
