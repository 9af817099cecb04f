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

#ifndef OMNIPRED_ORACLES_H_
#define OMNIPRED_ORACLES_H_

// Brute-force references for tests. Each refuses inputs above a small size
// cap (CapExceeded) and uses no code from the primary implementations.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "omnipred/cbr.h"
#include "omnipred/domain.h"
#include "omnipred/transcript.h"

namespace omnipred::oracles {

inline constexpr std::size_t kMaxSwapActions = 4;
inline constexpr std::size_t kMaxMinmaxGrid = 3;
inline constexpr std::size_t kMaxMinmaxEvents = 4;
inline constexpr std::size_t kMaxDynamicHorizon = 10;

// Scan every action; feasible means c_j(a,p) <= tol + 1e-9 for all j.
// Highest predicted utility wins, first index on ties, action 0 if none is
// feasible.
ActionId brute_cbr(const AgentSpec& agent, std::span<const double> p,
                   const DecisionRuleConfig& rule);

// Max over all maps phi: A -> B of sum_{t in S} u(phi(a_t), y_t) - u(a_t, y_t),
// B the lambda-benchmark of S. nullopt when B is empty.
std::optional<double> brute_swap(const Transcript& transcript, const AgentSpec& agent,
                                 std::size_t agent_index, std::span<const std::size_t> rounds,
                                 double lambda);

// One event of a d = 1 game: its indicator at each grid point and its expert
// weights for the + and - signs.
struct MinmaxEvent {
  std::vector<bool> fires;
  double q_plus = 0.0;
  double q_minus = 0.0;
};

struct MinmaxSearch {
  double value = 0.0;
  std::vector<double> psi;  // best simplex point found
};

// Grid search over {psi : psi_k in step Z, sum psi = 1}, minimizing
// max_{y in [0,1]} sum_E sum_sigma q sigma E_psi[E(p)(p - y)].
MinmaxSearch brute_minmax(std::span<const double> grid_points,
                          std::span<const MinmaxEvent> events, double step);

struct DynamicSearch {
  std::optional<double> benchmark;
  std::optional<double> regret;
};

// Every partition of [1, T] into at most budget + 1 segments, each with its
// best map into that segment's benchmark (lambda = policy(length)).
DynamicSearch brute_dynamic(const Transcript& transcript, const AgentSpec& agent,
                            std::size_t agent_index, std::size_t change_budget,
                            const MarginPolicy& policy);

}  // namespace omnipred::oracles

#endif  // OMNIPRED_ORACLES_H_
