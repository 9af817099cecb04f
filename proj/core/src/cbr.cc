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

namespace omnipred {

void validate_rule_config(const DecisionRuleConfig& config) {
  if (!(config.tol_eta >= 0.0 && config.tol_eta <= 1.0)) {
    throw InvalidArgument("tol_eta must lie in [0, 1]");
  }
}

bool predicted_infeasible(const AgentSpec& agent, std::size_t j,
                          ActionId action, std::span<const double> p,
                          double tol_eta) {
  return evaluate_constraint(agent, j, action, p) > tol_eta + kFeasibilityTolerance;
}

CbrResult cbr(const AgentSpec& agent, std::span<const double> p,
              const DecisionRuleConfig& rule) {
  CbrResult best{0, true};
  double best_utility = 0.0;
  for (ActionId a = 0; a < agent.num_actions(); ++a) {
    bool feasible = true;
    for (std::size_t j = 0; j < agent.num_constraints() && feasible; ++j) {
      feasible = !predicted_infeasible(agent, j, a, p, rule.tol_eta);
    }
    if (!feasible) continue;
    const double u = evaluate_utility(agent, a, p);
    if (best.feasible_set_empty || u > best_utility) {
      best = {a, false};
      best_utility = u;
    }
  }
  return best;
}

}  // namespace omnipred
