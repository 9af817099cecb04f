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

#include "omnipred/metrics.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "omnipred/errors.h"
#include "omnipred/oracle_check.h"
#include "omnipred/oracles.h"
#include "omnipred/subsequence.h"

namespace omnipred {
namespace {

// One agent; predictions default to the outcomes.
Transcript make_transcript(const std::vector<Vector>& outcomes,
                           const std::vector<ActionId>& actions,
                           const std::vector<Vector>& predictions = {}) {
  Transcript tr;
  tr.header.dim = outcomes.empty() ? 1 : outcomes[0].size();
  tr.header.horizon = outcomes.size();
  tr.header.spacing = 0.5;
  tr.header.num_agents = 1;
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    RoundRecord r;
    r.t = t + 1;
    r.prediction = predictions.empty() ? outcomes[t] : predictions[t];
    r.psi = PredictionDistribution::PointMass(r.prediction);
    r.actions = {actions[t]};
    r.outcome = outcomes[t];
    tr.rounds.push_back(std::move(r));
  }
  return tr;
}

std::vector<std::size_t> all_rounds(const Transcript& tr) {
  std::vector<std::size_t> out(tr.length());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = t + 1;
  return out;
}

TEST(Ccv, HandSum) {
  // Per-round values 0.2, -0.1, 0.3.
  AgentSpec shifted;
  shifted.utility = {{0.0, 0.0}};
  shifted.constraints = {{{0.5, -0.5}}};  // c = 0.5 (y1 - y2)
  const Transcript tr = make_transcript({{0.4, 0.0}, {0.0, 0.2}, {0.6, 0.0}}, {0, 0, 0});
  const CcvResult r = ccv(tr, {shifted, 0}, all_rounds(tr));
  EXPECT_NEAR(r.max, 0.4, 1e-12);
  ASSERT_EQ(r.per_constraint.size(), 1u);
  EXPECT_NEAR(r.per_constraint[0], 0.4, 1e-12);
  EXPECT_DOUBLE_EQ(ccv(tr, {shifted, 0}, {}).max, 0.0);
}

TEST(Ccv, FeasiblePlayIsNonpositive) {
  AgentSpec a;
  a.utility = {{0.0}};
  a.constraints = {{{-0.5}}, {{-0.1}}};
  const Transcript tr = make_transcript({{0.1}, {0.9}, {0.5}}, {0, 0, 0});
  EXPECT_LE(ccv(tr, {a, 0}, all_rounds(tr)).max, 0.0);
}

TEST(BenchmarkSet, Examples) {
  AgentSpec a;
  a.utility = {{0, 0}, {0, 0}};
  a.constraints = {{{-1, 0}, {0.5, 0}}};
  const Transcript tr = make_transcript({{0.5, 0.1}, {0.9, 1.0}, {0.7, 0.0}}, {0, 0, 0});
  const BenchmarkSet b = benchmark_set(tr, {a, 0}, all_rounds(tr), 0.25);
  EXPECT_EQ(b.actions, (std::vector<ActionId>{0}));
  EXPECT_TRUE(benchmark_set(tr, {a, 0}, all_rounds(tr), 1.5).empty());
  EXPECT_EQ(benchmark_set(tr, {a, 0}, {}, 0.25).actions, (std::vector<ActionId>{0, 1}));
  EXPECT_THROW(benchmark_set(tr, {a, 0}, all_rounds(tr), -0.1), InvalidArgument);
}

AgentSpec two_levels() {
  AgentSpec a;
  a.utility = {{0.2}, {0.8}};
  return a;
}

TEST(Regret, TwoRoundExample) {
  const Transcript tr = make_transcript({{1.0}, {1.0}}, {0, 0});
  EXPECT_NEAR(*external_regret(tr, {two_levels(), 0}, all_rounds(tr), 0.0), 1.2, 1e-12);
  EXPECT_NEAR(*swap_regret(tr, {two_levels(), 0}, all_rounds(tr), 0.0), 1.2, 1e-12);
  const Transcript best = make_transcript({{1.0}, {1.0}}, {1, 1});
  EXPECT_NEAR(*external_regret(best, {two_levels(), 0}, all_rounds(best), 0.0), 0.0, 1e-12);
  EXPECT_NEAR(*swap_regret(best, {two_levels(), 0}, all_rounds(best), 0.0), 0.0, 1e-12);
}

TEST(Regret, UndefinedWhenBenchmarkEmpty) {
  AgentSpec a = two_levels();
  a.constraints = {{{0.5}, {0.5}}};
  const Transcript tr = make_transcript({{1.0}, {1.0}}, {0, 1});
  EXPECT_FALSE(external_regret(tr, {a, 0}, all_rounds(tr), 0.0).has_value());
  EXPECT_FALSE(swap_regret(tr, {a, 0}, all_rounds(tr), 0.0).has_value());
}

// Random single-agent transcripts with a few actions.
Transcript random_transcript(Rng& rng, const AgentSpec& a, std::size_t T, std::size_t d) {
  std::vector<Vector> ys(T, Vector(d));
  std::vector<ActionId> acts(T);
  for (std::size_t t = 0; t < T; ++t) {
    for (double& v : ys[t]) v = 0.25 * uniform_index(rng, 5);
    acts[t] = uniform_index(rng, a.num_actions());
  }
  return make_transcript(ys, acts);
}

TEST(RegretProperties, SwapDominatesExternalAndMatchesOracle) {
  Rng rng(61);
  int both = 0;
  for (int n = 0; n < 400; ++n) {
    const AgentSpec a = random_agent(rng, 1 + uniform_index(rng, 4), uniform_index(rng, 2), 1,
                                     true);
    const Transcript tr = random_transcript(rng, a, 1 + uniform_index(rng, 12), 1);
    const double lambda = 0.25 * uniform_index(rng, 3);
    const auto rounds = all_rounds(tr);
    const auto ext = external_regret(tr, {a, 0}, rounds, lambda);
    const auto sw = swap_regret(tr, {a, 0}, rounds, lambda);
    const auto brute = oracles::brute_swap(tr, a, 0, rounds, lambda);
    ASSERT_EQ(sw.has_value(), brute.has_value());
    ASSERT_EQ(sw.has_value(), ext.has_value());
    if (!sw) continue;
    ++both;
    EXPECT_NEAR(*sw, *brute, 1e-9);
    EXPECT_GE(*sw, *ext - 1e-12);
    const BenchmarkSet b = benchmark_set(tr, {a, 0}, rounds, lambda);
    bool identity_ok = true;
    for (const auto& r : tr.rounds) {
      identity_ok &= std::find(b.actions.begin(), b.actions.end(), r.actions[0]) != b.actions.end();
    }
    if (identity_ok) {
      EXPECT_GE(*sw, -1e-12);
    }
  }
  EXPECT_GE(both, 200);
}

TEST(AdaptiveRegret, SingleRoundEqualsSwap) {
  const Transcript tr = make_transcript({{1.0}}, {0});
  const std::vector<IntervalRounds> one{{1, 1}};
  const AdaptiveRegret r =
      adaptive_regret(tr, {two_levels(), 0}, one, MarginPolicy::Fixed(0.0));
  EXPECT_NEAR(*r.value, *swap_regret(tr, {two_levels(), 0}, all_rounds(tr), 0.0), 1e-12);
}

TEST(AdaptiveRegret, AllIntervalsMatchBruteForce) {
  Rng rng(62);
  const MarginPolicy policy = MarginPolicy::PowerLaw();
  for (int n = 0; n < 100; ++n) {
    const AgentSpec a = random_agent(rng, 1 + uniform_index(rng, 3), 1, 1, true);
    const Transcript tr = random_transcript(rng, a, 5, 1);
    std::vector<IntervalRounds> family;
    for (const auto& s : all_intervals(5)) family.push_back(std::get<IntervalRounds>(s.kind()));
    ASSERT_EQ(family.size(), 15u);
    std::optional<double> best;
    for (const auto& iv : family) {
      std::vector<std::size_t> rounds;
      for (std::size_t t = iv.first; t <= iv.last; ++t) rounds.push_back(t);
      const auto v = oracles::brute_swap(tr, a, 0, rounds, policy.margin(rounds.size()));
      if (v && (!best || *v > *best)) best = v;
    }
    const AdaptiveRegret r = adaptive_regret(tr, {a, 0}, family, policy, 1 + n % 3);
    ASSERT_EQ(r.value.has_value(), best.has_value());
    if (!best) continue;
    EXPECT_NEAR(*r.value, *best, 1e-9);
    ASSERT_TRUE(r.witness.has_value());
    const auto full = swap_regret(tr, {a, 0}, all_rounds(tr), policy.margin(5));
    if (full) {
      EXPECT_GE(*r.value, *full - 1e-12);
    }
  }
}

TEST(AdaptiveRegret, UndefinedEverywhere) {
  AgentSpec a = two_levels();
  a.constraints = {{{0.5}, {0.5}}};
  const Transcript tr = make_transcript({{1.0}, {1.0}}, {0, 1});
  const std::vector<IntervalRounds> family{{1, 1}, {2, 2}, {1, 2}};
  const AdaptiveRegret r = adaptive_regret(tr, {a, 0}, family, MarginPolicy::Fixed(0.0));
  EXPECT_FALSE(r.value.has_value());
  EXPECT_FALSE(r.witness.has_value());
}

TEST(DynamicBenchmark, ZeroBudgetIsSwapBenchmark) {
  Rng rng(63);
  const MarginPolicy policy = MarginPolicy::PowerLaw();
  for (int n = 0; n < 100; ++n) {
    const AgentSpec a = random_agent(rng, 3, 1, 1, true);
    const Transcript tr = random_transcript(rng, a, 1 + uniform_index(rng, 12), 1);
    const DynamicRegret dp = dynamic_benchmark_dp(tr, {a, 0}, 0, policy);
    const auto sw = swap_regret(tr, {a, 0}, all_rounds(tr), policy.margin(tr.length()));
    ASSERT_EQ(dp.regret.has_value(), sw.has_value());
    if (sw) {
      EXPECT_NEAR(*dp.regret, *sw, 1e-9);
    }
  }
}

TEST(DynamicBenchmark, ForcedSwitchAndFullFlexibility) {
  // Action 0 pays y, action 1 pays 1 - y; the best action flips mid-run.
  AgentSpec a;
  a.utility = {{1.0, 0.0}, {0.0, 1.0}};
  const Transcript tr = make_transcript({{1, 0}, {1, 0}, {0, 1}, {0, 1}}, {0, 0, 0, 0});
  const MarginPolicy none = MarginPolicy::Fixed(0.0);
  const DynamicRegret one = dynamic_benchmark_dp(tr, {a, 0}, 1, none);
  EXPECT_NEAR(*one.benchmark, 4.0, 1e-12);
  EXPECT_NEAR(*one.regret, 2.0, 1e-12);
  EXPECT_EQ(one.segment_starts, (std::vector<std::size_t>{1, 3}));
  EXPECT_NEAR(*dynamic_benchmark_dp(tr, {a, 0}, 0, none).benchmark, 2.0, 1e-12);
  EXPECT_NEAR(*dynamic_benchmark_dp(tr, {a, 0}, 3, none).benchmark, 4.0, 1e-12);
  const auto brute = oracles::brute_dynamic(tr, a, 0, 1, none);
  EXPECT_NEAR(*brute.benchmark, 4.0, 1e-12);
}

TEST(DynamicBenchmark, MatchesOracleAndMonotoneInBudget) {
  Rng rng(64);
  const MarginPolicy policy = MarginPolicy::PowerLaw();
  for (int n = 0; n < 100; ++n) {
    const AgentSpec a = random_agent(rng, 1 + uniform_index(rng, 3), 1, 1, true);
    const std::size_t T = 1 + uniform_index(rng, 8);
    const Transcript tr = random_transcript(rng, a, T, 1);
    std::optional<double> previous;
    for (std::size_t budget = 0; budget < T; ++budget) {
      const DynamicRegret dp = dynamic_benchmark_dp(tr, {a, 0}, budget, policy);
      const auto brute = oracles::brute_dynamic(tr, a, 0, budget, policy);
      ASSERT_EQ(dp.benchmark.has_value(), brute.benchmark.has_value());
      if (!dp.benchmark) continue;
      EXPECT_NEAR(*dp.benchmark, *brute.benchmark, 1e-9);
      if (previous) {
        EXPECT_GE(*dp.benchmark, *previous - 1e-12);
      }
      previous = dp.benchmark;
    }
  }
}

TEST(DynamicBenchmark, CapIsEnforced) {
  const Transcript tr = make_transcript(std::vector<Vector>(12, Vector{0.5}),
                                        std::vector<ActionId>(12, 0));
  EXPECT_THROW(dynamic_benchmark_dp(tr, {two_levels(), 0}, 1, MarginPolicy::Fixed(0), 10),
               CapExceeded);
}

struct BiasFixture {
  std::vector<AgentSpec> agents;
  std::vector<SubsequenceSpec> subs{SubsequenceSpec::Interval(1, 3)};
  EventRegistry registry;
  BiasFixture() : agents(make()), registry(EventRegistry::build(agents, subs, {})) {}
  static std::vector<AgentSpec> make() {
    AgentSpec a;
    a.id = "solo";
    a.utility = {{0.0, 0.0}};
    return {a};
  }
};

TEST(CalibrationBias, HandSum) {
  BiasFixture f;
  const Transcript tr = make_transcript({{0.2, 0.5}, {0.5, 0.5}}, {0, 0},
                                        {{0.5, 0.4}, {0.4, 0.4}});
  const auto realized = calibration_bias(tr, f.registry, f.agents, f.subs, {});
  ASSERT_EQ(realized.size(), 1u);
  EXPECT_NEAR(realized[0].bias, 0.2, 1e-12);
  EXPECT_NEAR(realized[0].signed_sum[0], 0.2, 1e-12);
  EXPECT_NEAR(realized[0].signed_sum[1], -0.2, 1e-12);
  EXPECT_DOUBLE_EQ(realized[0].activation, 2.0);
  // Point-mass psi: realized and expected agree.
  const auto expected = expected_calibration_bias(tr, f.registry, f.agents, f.subs, {});
  EXPECT_NEAR(expected[0].bias, realized[0].bias, 1e-12);
}

TEST(CalibrationBias, ExactPredictionsAndSilentEvents) {
  BiasFixture f;
  const Transcript exact = make_transcript({{0.2, 0.5}, {0.5, 0.5}}, {0, 0});
  EXPECT_DOUBLE_EQ(calibration_bias(exact, f.registry, f.agents, f.subs, {})[0].bias, 0.0);

  const std::vector<SubsequenceSpec> later{SubsequenceSpec::Interval(5, 6)};
  const EventRegistry silent = EventRegistry::build(f.agents, later, {});
  const auto r = calibration_bias(exact, silent, f.agents, later, {});
  EXPECT_DOUBLE_EQ(r[0].bias, 0.0);
  EXPECT_DOUBLE_EQ(r[0].activation, 0.0);
}

TEST(Counts, PredictedInfeasibleAndEmptyRounds) {
  AgentSpec a;
  a.utility = {{0.0}, {0.0}};
  a.constraints = {{{1.0}, {-1.0}}};
  // c(a0, p) = p: infeasible whenever p > 0.
  const Transcript tr = make_transcript({{0.0}, {0.5}, {1.0}}, {1, 1, 1});
  EXPECT_EQ(predicted_infeasible_counts(tr, a, 0, all_rounds(tr), 0.0),
            (std::vector<std::size_t>{2}));
  EXPECT_EQ(predicted_infeasible_counts(tr, a, 0, all_rounds(tr), 0.6),
            (std::vector<std::size_t>{1}));
  EXPECT_EQ(empty_feasible_rounds(tr, a, all_rounds(tr), {}), 0u);
}

}  // namespace
}  // namespace omnipred
