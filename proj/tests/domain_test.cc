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

#include "omnipred/domain.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "omnipred/errors.h"
#include "omnipred/oracle_check.h"
#include "omnipred/rng.h"

namespace omnipred {
namespace {

AgentSpec one_action(Vector w, std::vector<Vector> v = {}) {
  AgentSpec a;
  a.id = "a";
  a.utility = {std::move(w)};
  for (auto& row : v) a.constraints.push_back({row});
  return a;
}

TEST(ValidateAgentSpec, AcceptsBoundedRows) {
  EXPECT_TRUE(validate_agent_spec(one_action({0.5, 0.5}, {{-0.5, 0.5}}), 2).ok());
}

TEST(ValidateAgentSpec, RejectsUtilityNormAboveOne) {
  const auto report = validate_agent_spec(one_action({0.8, 0.4}), 2);
  ASSERT_FALSE(report.ok());
  EXPECT_NE(report.problems[0].find("1.2"), std::string::npos) << report.problems[0];
}

TEST(ValidateAgentSpec, RejectsNegativeUtilityWeight) {
  EXPECT_FALSE(validate_agent_spec(one_action({-0.1, 0.2}), 2).ok());
}

TEST(ValidateAgentSpec, ReportsEveryProblem) {
  AgentSpec a = one_action({-0.1, 2.0}, {{1.0, 1.0}});
  a.utility.push_back({0.1});  // wrong length
  const auto report = validate_agent_spec(a, 2);
  EXPECT_GE(report.problems.size(), 3u);
}

TEST(ValidateAgentSpec, RejectsEmptyActionSet) {
  AgentSpec a;
  a.id = "none";
  EXPECT_FALSE(validate_agent_spec(a, 1).ok());
}

TEST(EvaluateUtility, Examples) {
  EXPECT_DOUBLE_EQ(evaluate_utility(one_action({1, 0}), 0, Vector{0.3, 0.9}), 0.3);
  EXPECT_DOUBLE_EQ(evaluate_utility(one_action({0, 0}), 0, Vector{0.7, 0.1}), 0.0);
  EXPECT_DOUBLE_EQ(evaluate_utility(one_action({0.5, 0.5}), 0, Vector{0.5, 0.25}), 0.375);
}

TEST(EvaluateUtility, ActionOutOfRangeThrows) {
  EXPECT_THROW(evaluate_utility(one_action({1, 0}), 1, Vector{0.3, 0.9}), InvalidArgument);
}

TEST(EvaluateConstraint, Examples) {
  const Vector y{0.5, 0.25};
  EXPECT_DOUBLE_EQ(evaluate_constraint(one_action({0, 0}, {{1, -1}}), 0, 0, y), 0.25);
  EXPECT_DOUBLE_EQ(evaluate_constraint(one_action({0, 0}, {{0, 0}}), 0, 0, y), 0.0);
  EXPECT_DOUBLE_EQ(evaluate_constraint(one_action({0, 0}, {{-1, 0}}), 0, 0, Vector{1, 1}), -1.0);
  EXPECT_THROW(evaluate_constraint(one_action({0, 0}, {{1, -1}}), 1, 0, y), InvalidArgument);
}

TEST(LipschitzConstants, Examples) {
  AgentSpec a;
  a.utility = {{1, 0}, {0.5, 0.5}};
  a.constraints = {{{0, 0}, {0, 0}}};
  std::vector<AgentSpec> agents{a};
  EXPECT_DOUBLE_EQ(lipschitz_constants(agents).utility, 1.0);
  EXPECT_DOUBLE_EQ(lipschitz_constants(agents).constraint, 0.0);

  AgentSpec b = a;
  b.constraints = {{{0.3, -0.6}, {0.1, 0.1}}};
  AgentSpec c = a;
  c.constraints = {{{0.2, 0.2}, {-0.5, 0.1}}};
  agents = {b, c};
  EXPECT_DOUBLE_EQ(lipschitz_constants(agents).constraint, 0.9);
  EXPECT_THROW(lipschitz_constants(std::vector<AgentSpec>{}), InvalidArgument);
}

TEST(Augmentation, AppendsPinnedOne) {
  EXPECT_EQ(augment_constant_coordinate(Vector{0.2, 0.7}), (Vector{0.2, 0.7, 1.0}));
  const AgentSpec a = one_action({0, 0, 0}, {{0, 0, -0.3}});
  for (double y : {0.0, 0.4, 1.0}) {
    EXPECT_DOUBLE_EQ(evaluate_constraint(a, 0, 0, augment_constant_coordinate(Vector{y, y})), -0.3);
  }
}

TEST(MarginPolicy, FixedAndPowerLaw) {
  EXPECT_DOUBLE_EQ(MarginPolicy::Fixed(0.25).margin(1000), 0.25);
  EXPECT_DOUBLE_EQ(MarginPolicy::PowerLaw().margin(16), 0.5);
  EXPECT_DOUBLE_EQ(MarginPolicy::PowerLaw().margin(0), 0.0);
  EXPECT_THROW(MarginPolicy::Fixed(-0.1), InvalidArgument);
}

TEST(PredictionDistribution, Validation) {
  EXPECT_NO_THROW(validate_distribution(PredictionDistribution::PointMass({0.5}), 1));
  PredictionDistribution bad{{{0.5}, {0.5}}, {0.5, 0.5}};
  EXPECT_THROW(validate_distribution(bad, 1), InvalidArgument);  // repeated point
  PredictionDistribution unnormalized{{{0.0}, {0.5}}, {0.5, 0.4}};
  EXPECT_THROW(validate_distribution(unnormalized, 1), InvalidArgument);
}

// Linear maps attain their extremes on vertices, so vertex checks cover the cube.
TEST(DomainProperties, RangesOnCubeVertices) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + uniform_index(rng, 4);
    const AgentSpec a = random_agent(rng, 3, 2, d, trial % 2 == 0);
    ASSERT_TRUE(validate_agent_spec(a, d).ok());
    for (std::size_t mask = 0; mask < (1u << d); ++mask) {
      Vector y(d);
      for (std::size_t i = 0; i < d; ++i) y[i] = (mask >> i) & 1u;
      for (ActionId act = 0; act < 3; ++act) {
        const double u = evaluate_utility(a, act, y);
        EXPECT_GE(u, 0.0);
        EXPECT_LE(u, 1.0);
        for (std::size_t j = 0; j < 2; ++j) {
          const double c = evaluate_constraint(a, j, act, y);
          EXPECT_GE(c, -1.0);
          EXPECT_LE(c, 1.0);
        }
      }
    }
  }
}

TEST(DomainProperties, LinearityAndLipschitz) {
  Rng rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 1 + uniform_index(rng, 4);
    const AgentSpec a = random_agent(rng, 2, 1, d, false);
    const std::vector<AgentSpec> agents{a};
    const LipschitzConstants lc = lipschitz_constants(agents);
    Vector y1(d), y2(d), mix(d);
    const double k1 = uniform01(rng), k2 = uniform01(rng);
    double dist = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      y1[i] = uniform01(rng);
      y2[i] = uniform01(rng);
      mix[i] = k1 * y1[i] + k2 * y2[i];
      dist = std::max(dist, std::abs(y1[i] - y2[i]));
    }
    // The combination may leave the cube; dot products stay linear there.
    const double lhs = dot(a.utility[0], mix);
    EXPECT_NEAR(lhs, k1 * evaluate_utility(a, 0, y1) + k2 * evaluate_utility(a, 0, y2), 1e-12);
    EXPECT_LE(std::abs(evaluate_utility(a, 1, y1) - evaluate_utility(a, 1, y2)),
              lc.utility * dist + 1e-12);
    EXPECT_LE(std::abs(evaluate_constraint(a, 0, 1, y1) - evaluate_constraint(a, 0, 1, y2)),
              lc.constraint * dist + 1e-12);
  }
}

}  // namespace
}  // namespace omnipred
