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

#include "omnipred/cbr.h"

#include <gtest/gtest.h>

#include "omnipred/errors.h"
#include "omnipred/oracle_check.h"
#include "omnipred/oracles.h"

namespace omnipred {
namespace {

// Three actions, one constraint.
AgentSpec worked_agent() {
  AgentSpec a;
  a.id = "worked";
  a.utility = {{1, 0}, {0, 1}, {0.5, 0.5}};
  a.constraints = {{{1, -1}, {-1, 1}, {-0.5, -0.5}}};
  return a;
}

const Vector kP{0.5, 0.25};

TEST(PredictedInfeasible, Examples) {
  const AgentSpec a = worked_agent();
  EXPECT_TRUE(predicted_infeasible(a, 0, 0, kP, 0.0));
  EXPECT_FALSE(predicted_infeasible(a, 0, 0, kP, 0.3));
  AgentSpec zero = a;
  zero.constraints = {{{0, 0}, {0, 0}, {0, 0}}};
  EXPECT_FALSE(predicted_infeasible(zero, 0, 0, kP, 0.0));
}

TEST(PredictedInfeasible, AbsorbsRoundingAtTheBoundary) {
  AgentSpec a;
  a.utility = {{0.0}};
  a.constraints = {{{0.1}}};
  // 0.1 * 3 is slightly above 0.3 in floating point.
  EXPECT_FALSE(predicted_infeasible(a, 0, 0, Vector{1.0}, 0.1));
  EXPECT_FALSE(predicted_infeasible(a, 0, 0, Vector{0.0}, 0.0));
}

TEST(Cbr, WorkedInstanceStrict) {
  const CbrResult r = cbr(worked_agent(), kP, {0.0});
  EXPECT_EQ(r.action, 2u);  // third action
  EXPECT_FALSE(r.feasible_set_empty);
}

TEST(Cbr, WorkedInstanceRelaxed) {
  EXPECT_EQ(cbr(worked_agent(), kP, {0.3}).action, 0u);
}

TEST(Cbr, AllInfeasibleFallsBackToFirstAction) {
  AgentSpec a = worked_agent();
  a.constraints = {{{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}};
  const CbrResult r = cbr(a, kP, {0.0});
  EXPECT_EQ(r.action, 0u);
  EXPECT_TRUE(r.feasible_set_empty);
}

TEST(Cbr, TiesGoToLowestIndex) {
  AgentSpec a;
  a.utility = {{0.2}, {0.5}, {0.5}};
  EXPECT_EQ(cbr(a, Vector{0.6}, {0.0}).action, 1u);
}

TEST(Cbr, RejectsBadTolerance) {
  EXPECT_THROW(validate_rule_config({-0.1}), InvalidArgument);
  EXPECT_THROW(validate_rule_config({1.5}), InvalidArgument);
}

TEST(CbrProperties, MatchesOracle) {
  Rng rng(11);
  for (int n = 0; n < 2000; ++n) {
    const bool coarse = n % 2 == 0;
    const std::size_t d = 1 + uniform_index(rng, 4);
    const AgentSpec a = random_agent(rng, 1 + uniform_index(rng, 8), uniform_index(rng, 4), d,
                                     coarse);
    Vector p(d);
    for (double& v : p) v = coarse ? 0.25 * uniform_index(rng, 5) : uniform01(rng);
    const DecisionRuleConfig rule{0.1 * uniform_index(rng, 3)};
    ASSERT_EQ(cbr(a, p, rule).action, oracles::brute_cbr(a, p, rule)) << "instance " << n;
  }
}

TEST(CbrProperties, UtilityNondecreasingInTolerance) {
  Rng rng(12);
  for (int n = 0; n < 1000; ++n) {
    const std::size_t d = 1 + uniform_index(rng, 3);
    const AgentSpec a = random_agent(rng, 5, 2, d, n % 2 == 0);
    Vector p(d);
    for (double& v : p) v = uniform01(rng);
    const double t1 = 0.5 * uniform01(rng);
    const double t2 = t1 + 0.5 * uniform01(rng);
    const CbrResult r1 = cbr(a, p, {t1});
    const CbrResult r2 = cbr(a, p, {t2});
    if (r1.feasible_set_empty) continue;
    EXPECT_FALSE(r2.feasible_set_empty);
    EXPECT_GE(dot(a.utility[r2.action], p), dot(a.utility[r1.action], p));
  }
}

TEST(CbrProperties, Stateless) {
  const AgentSpec a = worked_agent();
  const CbrResult first = cbr(a, kP, {0.0});
  for (int i = 0; i < 10; ++i) EXPECT_EQ(cbr(a, kP, {0.0}), first);
}

}  // namespace
}  // namespace omnipred
