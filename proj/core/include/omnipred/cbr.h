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

#ifndef OMNIPRED_CBR_H_
#define OMNIPRED_CBR_H_

#include <span>

#include "omnipred/domain.h"

namespace omnipred {

// Agent decision rule parameters. tol_eta = 0 is the strict constrained best
// response; tol_eta > 0 is the relaxed rule used against zero-margin
// benchmarks. Ties and the empty-feasible-set fallback both resolve to the
// lowest action index.
struct DecisionRuleConfig {
  double tol_eta = 0.0;
};

// Throws InvalidArgument unless tol_eta is in [0, 1].
void validate_rule_config(const DecisionRuleConfig& config);

// True iff c_j(action, p) > tol_eta (up to kFeasibilityTolerance).
bool predicted_infeasible(const AgentSpec& agent, std::size_t j,
                          ActionId action, std::span<const double> p,
                          double tol_eta);

struct CbrResult {
  ActionId action = 0;
  bool feasible_set_empty = false;

  friend bool operator==(const CbrResult&, const CbrResult&) = default;
};

// Constrained best response: argmax of <w_a, p> over actions that are not
// predicted infeasible for any constraint.
CbrResult cbr(const AgentSpec& agent, std::span<const double> p,
              const DecisionRuleConfig& rule);

}  // namespace omnipred

#endif  // OMNIPRED_CBR_H_
