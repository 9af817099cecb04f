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

#ifndef OMNIPRED_METRICS_H_
#define OMNIPRED_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "omnipred/cbr.h"
#include "omnipred/domain.h"
#include "omnipred/events.h"
#include "omnipred/subsequence.h"
#include "omnipred/transcript.h"

namespace omnipred {

// All metric functions take the rounds of S as 1-based indices into the
// transcript, and the agent's position in each round's action list.
struct AgentView {
  const AgentSpec& spec;
  std::size_t index;
};

struct CcvResult {
  Vector per_constraint;  // sum_{t in S} c_j(a_t, y_t)
  double max = 0.0;       // max_j, 0 when J = 0
};

CcvResult ccv(const Transcript& transcript, AgentView agent,
              std::span<const std::size_t> rounds);

// {a : c_j(a, y_t) <= -lambda for all t in S, j}. Empty S gives every action.
struct BenchmarkSet {
  double margin = 0.0;
  std::vector<ActionId> actions;

  bool empty() const { return actions.empty(); }
};

BenchmarkSet benchmark_set(const Transcript& transcript, AgentView agent,
                           std::span<const std::size_t> rounds, double lambda);

// Undefined (nullopt) exactly when the benchmark set is empty.
std::optional<double> external_regret(const Transcript& transcript, AgentView agent,
                                      std::span<const std::size_t> rounds, double lambda);

// sum over played a of max_{b in benchmark} sum_{t in S, a_t = a} (u(b,y_t) - u(a,y_t)).
std::optional<double> swap_regret(const Transcript& transcript, AgentView agent,
                                  std::span<const std::size_t> rounds, double lambda);

struct AdaptiveRegret {
  std::optional<double> value;
  std::optional<IntervalRounds> witness;
};

// Max of swap_regret over the given intervals with lambda = policy(|I|),
// skipping intervals whose benchmark is empty. Ties keep the earliest
// interval in the list.
AdaptiveRegret adaptive_regret(const Transcript& transcript, AgentView agent,
                               std::span<const IntervalRounds> intervals,
                               const MarginPolicy& policy, std::size_t threads = 1);

inline constexpr std::size_t kDefaultDpCap = 600;

struct DynamicRegret {
  std::optional<double> benchmark;        // best piecewise swap benchmark utility
  std::optional<double> regret;           // benchmark - realized utility
  std::vector<std::size_t> segment_starts;  // first round of each segment
};

// Best benchmark over partitions of [1, T] into at most budget + 1 segments,
// each with its own swap map into that segment's benchmark set
// (lambda = policy(segment length)). Throws CapExceeded when T > dp_cap.
DynamicRegret dynamic_benchmark_dp(const Transcript& transcript, AgentView agent,
                                   std::size_t change_budget, const MarginPolicy& policy,
                                   std::size_t dp_cap = kDefaultDpCap);

struct EventBias {
  Vector signed_sum;      // sum_t E (p_t - y_t), or its psi-expectation
  double bias = 0.0;      // l-infinity norm of signed_sum
  double activation = 0.0;  // rounds fired (expected mass for the psi version)
};

// Realized bias of every registry event, recomputed from the transcript's
// predictions and outcomes with a fresh decision-rule evaluation.
std::vector<EventBias> calibration_bias(const Transcript& transcript,
                                        const EventRegistry& registry,
                                        std::span<const AgentSpec> agents,
                                        std::span<const SubsequenceSpec> subseqs,
                                        const DecisionRuleConfig& rule);

// Same with the prediction replaced by its recorded distribution psi_t.
std::vector<EventBias> expected_calibration_bias(const Transcript& transcript,
                                                 const EventRegistry& registry,
                                                 std::span<const AgentSpec> agents,
                                                 std::span<const SubsequenceSpec> subseqs,
                                                 const DecisionRuleConfig& rule);

// T^{c_j,S,inf}(a) for each constraint j: rounds of S where 'action' was
// predicted (tol-)infeasible for constraint j.
std::vector<std::size_t> predicted_infeasible_counts(const Transcript& transcript,
                                                     const AgentSpec& agent, ActionId action,
                                                     std::span<const std::size_t> rounds,
                                                     double tol_eta);

// Rounds of S on which the agent's predicted feasible set was empty.
std::size_t empty_feasible_rounds(const Transcript& transcript, const AgentSpec& agent,
                                  std::span<const std::size_t> rounds,
                                  const DecisionRuleConfig& rule);

}  // namespace omnipred

#endif  // OMNIPRED_METRICS_H_
