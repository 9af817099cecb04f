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

#include "omnipred/adversary.h"

#include <gtest/gtest.h>

#include <cmath>

#include "omnipred/errors.h"

namespace omnipred {
namespace {

AdversarySpec iid(std::vector<Vector> atoms, Vector probs) {
  return AdversarySpec{IidOutcomes{{std::move(atoms), std::move(probs)}}, {}};
}

std::vector<HistoryEntry> history_of(std::size_t n) {
  std::vector<HistoryEntry> h(n);
  for (std::size_t t = 0; t < n; ++t) h[t] = {t + 1, 0, {0.5}, {0.5}};
  return h;
}

TEST(Adversary, SingleAtomIsDeterministic) {
  const Adversary adv(iid({{0.3}}, {1.0}), 1, 5);
  Rng rng(1);
  const Commitment c = adv.commit_round(1, {}, rng);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(c.sampler.sample(rng), (Vector{0.3}));
}

TEST(Adversary, PiecewiseBoundary) {
  PiecewiseStationary pw{{{1, {{{0.1}}, {1.0}}}, {11, {{{0.9}}, {1.0}}}}};
  const Adversary adv(AdversarySpec{pw, {}}, 1, 20);
  Rng rng(2);
  for (std::size_t t = 1; t <= 20; ++t) {
    const auto h = history_of(t - 1);
    const Vector y = adv.commit_round(t, h, rng).sampler.sample(rng);
    EXPECT_EQ(y[0], t <= 10 ? 0.1 : 0.9) << "t=" << t;
  }
}

TEST(Adversary, IidFrequenciesWithinThreeSigma) {
  const Adversary adv(iid({{0.0}, {1.0}}, {0.3, 0.7}), 1, 1);
  Rng rng(3);
  const Commitment c = adv.commit_round(1, {}, rng);
  const int n = 10000;
  int first = 0;
  for (int i = 0; i < n; ++i) first += c.sampler.sample(rng)[0] == 0.0;
  EXPECT_NEAR(first / double(n), 0.3, 3 * std::sqrt(0.3 * 0.7 / n));
}

TEST(Adversary, DriftInterpolatesLinearly) {
  DriftingOutcomes drift{{{0.0}, {1.0}}, {1.0, 0.0}, {0.0, 1.0}};
  const Adversary adv(AdversarySpec{drift, {}}, 1, 5);
  Rng rng(4);
  const auto h = history_of(2);
  const AtomMixture m = adv.commit_round(3, h, rng).sampler.distribution();
  EXPECT_DOUBLE_EQ(m.probs[0], 0.5);
  EXPECT_DOUBLE_EQ(m.probs[1], 0.5);
}

TEST(Adversary, FeatureSchedules) {
  AdversarySpec spec = iid({{0.5}}, {1.0});
  spec.features = {FeatureSchedule::Kind::kCyclic, 3};
  const Adversary cyc(spec, 1, 10);
  Rng rng(5);
  for (std::size_t t = 1; t <= 7; ++t) {
    const auto h = history_of(t - 1);
    EXPECT_EQ(cyc.commit_round(t, h, rng).feature, (t - 1) % 3);
  }
  spec.features = {FeatureSchedule::Kind::kRandom, 4};
  const Adversary rnd(spec, 1, 10);
  for (int i = 0; i < 50; ++i) EXPECT_LT(rnd.commit_round(1, {}, rng).feature, 4u);
}

TEST(Adversary, RejectsBadRoundsAndHistory) {
  const Adversary adv(iid({{0.5}}, {1.0}), 1, 3);
  Rng rng(6);
  EXPECT_THROW(adv.commit_round(0, {}, rng), InvalidArgument);
  EXPECT_THROW(adv.commit_round(4, history_of(3), rng), InvalidArgument);
  EXPECT_THROW(adv.commit_round(2, {}, rng), ProtocolError);
}

TEST(Adversary, Validation) {
  EXPECT_THROW(validate_adversary(iid({{1.5}}, {1.0}), 1, 5), InvalidArgument);
  EXPECT_THROW(validate_adversary(iid({{0.5}, {0.1}}, {0.5, 0.6}), 1, 5), InvalidArgument);
  EXPECT_THROW(validate_adversary(iid({{0.5, 0.5}}, {1.0}), 1, 5), InvalidArgument);
  PiecewiseStationary late{{{2, {{{0.1}}, {1.0}}}}};
  EXPECT_THROW(validate_adversary(AdversarySpec{late, {}}, 1, 5), InvalidArgument);
  EXPECT_THROW(Adversary(AdversarySpec{BiasChaser{{{0.1}}, 0}, {}}, 1, 5), InvalidArgument);
}

TEST(Adversary, ChaserPushesBiasFurther) {
  const EventOracle always = [](std::size_t, FeatureId, std::span<const double>) { return true; };
  const Adversary adv(AdversarySpec{BiasChaser{{{0.2}, {0.8}}, 0}, {}}, 1, 5, always);
  EXPECT_EQ(adversary_kind_name(adv.spec()), "bias_chaser(heuristic)");
  Rng rng(7);
  // Over-prediction so far: the low atom widens the gap.
  std::vector<HistoryEntry> over{{1, 0, {0.9}, {0.5}}};
  EXPECT_EQ(adv.commit_round(2, over, rng).sampler.sample(rng), (Vector{0.2}));
  std::vector<HistoryEntry> under{{1, 0, {0.1}, {0.5}}};
  EXPECT_EQ(adv.commit_round(2, under, rng).sampler.sample(rng), (Vector{0.8}));
}

TEST(Adversary, SameSeedSameOutcomes) {
  PiecewiseStationary pw{{{1, {{{0.1}, {0.4}}, {0.5, 0.5}}}, {4, {{{0.9}, {0.6}}, {0.2, 0.8}}}}};
  AdversarySpec spec{pw, {FeatureSchedule::Kind::kRandom, 3}};
  auto draw = [&](std::uint64_t seed) {
    const Adversary adv(spec, 1, 8);
    Rng rng(seed);
    std::vector<HistoryEntry> h;
    for (std::size_t t = 1; t <= 8; ++t) {
      const Commitment c = adv.commit_round(t, h, rng);
      h.push_back({t, c.feature, {0.5}, c.sampler.sample(rng)});
    }
    return h;
  };
  const auto a = draw(99), b = draw(99);
  for (std::size_t t = 0; t < a.size(); ++t) {
    EXPECT_EQ(a[t].feature, b[t].feature);
    EXPECT_EQ(a[t].outcome, b[t].outcome);
  }
}

AgentSpec one_constraint(std::vector<Vector> rows) {
  AgentSpec a;
  a.utility.assign(rows.size(), Vector(rows[0].size(), 0.0));
  a.constraints = {std::move(rows)};
  return a;
}

TEST(StrictFeasibility, Examples) {
  const std::vector<AgentSpec> good{one_constraint({{-1.0, 0.0}})};
  const FeasibilityReport ok = strict_feasibility_check(iid({{1.0, 0.0}}, {1.0}), good, 0.5);
  EXPECT_TRUE(ok.all_feasible());
  EXPECT_EQ(ok.entries[0].witnesses, (std::vector<ActionId>{0}));

  const std::vector<AgentSpec> flat{one_constraint({{0.0, 0.0}, {0.0, 0.0}})};
  EXPECT_FALSE(strict_feasibility_check(iid({{1.0, 0.0}}, {1.0}), flat, 0.1).all_feasible());
}

TEST(StrictFeasibility, FlagsOnlyTheFailingSegment) {
  // c = -y: fine while y is large, fails once y drops below lambda.
  const std::vector<AgentSpec> agents{one_constraint({{-1.0}})};
  PiecewiseStationary pw{{{1, {{{0.8}, {0.9}}, {0.5, 0.5}}}, {6, {{{0.1}}, {1.0}}}}};
  const FeasibilityReport r = strict_feasibility_check(AdversarySpec{pw, {}}, agents, 0.5);
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_TRUE(r.entries[0].feasible);
  EXPECT_FALSE(r.entries[1].feasible);
  EXPECT_FALSE(r.all_feasible());
}

TEST(StrictFeasibility, ZeroProbabilityAtomsDoNotCount) {
  const std::vector<AgentSpec> agents{one_constraint({{-1.0}})};
  EXPECT_TRUE(strict_feasibility_check(iid({{0.9}, {0.0}}, {1.0, 0.0}), agents, 0.5)
                  .all_feasible());
}

}  // namespace
}  // namespace omnipred
