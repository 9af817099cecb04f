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

#ifndef OMNIPRED_FORECASTER_H_
#define OMNIPRED_FORECASTER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "omnipred/cbr.h"
#include "omnipred/domain.h"
#include "omnipred/events.h"
#include "omnipred/grid.h"
#include "omnipred/rng.h"
#include "omnipred/subsequence.h"

namespace omnipred {

// sqrt(8 ln(2 d |E|) / T).
double default_learning_rate(std::size_t horizon, std::size_t dim, std::size_t num_events);

// Cumulative expected payoffs G^{E,i} = sum_{s<t} E_psi_s[E(x_s,p)(p^i - y_s^i)]
// of the (E, i, +) experts; the (E, i, -) payoff is -G^{E,i}.
class WeightState {
 public:
  WeightState(std::size_t num_events, std::size_t dim, double lr_eta);

  std::size_t num_events() const { return num_events_; }
  std::size_t dim() const { return dim_; }
  double lr_eta() const { return lr_eta_; }

  double cumulative(std::size_t event, std::size_t coord) const {
    return g_[event * dim_ + coord];
  }
  void add(std::size_t event, std::size_t coord, double increment) {
    g_[event * dim_ + coord] += increment;
  }
  const Vector& raw() const { return g_; }

  // log sum over all 2 d |E| experts of exp(sigma (lr/2) G), max-shifted.
  double log_normalizer() const;

 private:
  std::size_t num_events_;
  std::size_t dim_;
  double lr_eta_;
  Vector g_;
};

// q^{E,i,sigma} proportional to exp((lr/2) sigma G^{E,i}), over all triples.
struct ExpertDistribution {
  std::size_t dim = 0;
  Vector plus;   // [event * dim + coord]
  Vector minus;

  double weight(std::size_t event, std::size_t coord, int sigma) const {
    return sigma > 0 ? plus[event * dim + coord] : minus[event * dim + coord];
  }
};

ExpertDistribution compute_expert_distribution(const WeightState& weights);

struct MinmaxSolution {
  PredictionDistribution psi;
  std::vector<std::size_t> support_indices;  // grid indices of psi.support
  double game_value = 0.0;
  std::size_t lp_iterations = 0;
};

// Minimax step over distributions on the grid. coefficients[k][i] is the
// net expert weight sum_{E,sigma} q^{E,i,sigma} sigma E(x, p_k) at grid point
// k. For a distribution psi the adversary's best response gives
//   V(psi) = sum_i C_i(psi) + max(0, -D_i(psi)),
//   C_i = sum_k psi_k a_i(k) p_k^i,  D_i = sum_k psi_k a_i(k),
// minimized by an LP with slacks s_i >= max(0, -D_i). Pinned coordinates
// contribute nothing. Throws SolverError if the LP does not solve.
MinmaxSolution solve_round_minmax(const GridSpec& grid,
                                  std::span<const Vector> coefficients);

// V(psi) for psi given as weights over grid indices.
double minmax_objective(const GridSpec& grid, std::span<const Vector> coefficients,
                        std::span<const double> grid_weights);

// Per-event expert weights for the convenience overload below.
struct ActiveEventWeights {
  Vector plus;   // q^{E,i,+} per coordinate
  Vector minus;  // q^{E,i,-}
};

// fires(event position, grid index) -> E(x, p_k).
using GridIndicator = std::function<bool(std::size_t, std::size_t)>;

MinmaxSolution solve_round_minmax(std::span<const ActiveEventWeights> events,
                                  const GridIndicator& fires, const GridSpec& grid);

// One inverse-CDF draw from psi; always consumes exactly one engine output.
Vector sample_prediction(const PredictionDistribution& psi, Rng& rng);

// Indicator of one active event at each support point of psi.
struct SupportFiring {
  std::size_t event = 0;
  std::vector<std::uint8_t> fires;  // per support point
};

// G^{E,i} += sum_{p in supp psi} psi(p) E(x,p) (p^i - y^i) for each listed
// event; unlisted events are untouched.
void record_outcome(WeightState& weights, const PredictionDistribution& psi,
                    std::span<const SupportFiring> active, std::span<const double> y);

struct ForecasterOptions {
  double lr_eta = 0.0;  // <= 0 selects default_learning_rate
  std::size_t horizon = 0;
  std::uint64_t sampling_seed = 0;
  DecisionRuleConfig rule;
};

struct RoundOutput {
  std::size_t t = 0;
  PredictionDistribution psi;
  Vector prediction;
  double game_value = 0.0;
  std::size_t active_events = 0;
  std::size_t lp_iterations = 0;
};

// Decision/infeasibility calibrated forecaster: exponential weights over
// (event, coordinate, sign) experts plus a per-round minimax solve. Rounds
// must alternate predict(t) / observe(y_t) for t = 1, 2, ...
class Forecaster {
 public:
  Forecaster(std::vector<AgentSpec> agents, std::vector<SubsequenceSpec> subseqs,
             GridSpec grid, const ForecasterOptions& options,
             std::size_t registry_cap = kDefaultRegistryCap);

  const RoundOutput& predict(std::size_t t, FeatureId x);
  void observe(std::span<const double> y);

  const EventRegistry& registry() const { return registry_; }
  const WeightState& weights() const { return weights_; }
  const GridSpec& grid() const { return grid_; }
  const std::vector<AgentSpec>& agents() const { return agents_; }
  const std::vector<SubsequenceSpec>& subsequences() const { return subseqs_; }
  const DecisionRuleConfig& rule() const { return options_.rule; }
  std::size_t completed_rounds() const { return next_round_ - 1; }

  // Rounds on which each event fired at the realized prediction.
  const std::vector<std::size_t>& activation_counts() const { return activations_; }

 private:
  std::vector<AgentSpec> agents_;
  std::vector<SubsequenceSpec> subseqs_;
  GridSpec grid_;
  ForecasterOptions options_;
  EventRegistry registry_;
  WeightState weights_;
  Rng rng_;
  std::vector<EventProfile> grid_profiles_;
  std::vector<std::size_t> activations_;

  std::size_t next_round_ = 1;
  bool awaiting_outcome_ = false;
  RoundOutput current_;
  std::vector<std::size_t> current_support_;
  std::vector<std::size_t> current_active_;
};

}  // namespace omnipred

#endif  // OMNIPRED_FORECASTER_H_
