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

#include <algorithm>
#include <cmath>
#include <limits>

#include "omnipred/parallel.h"

namespace omnipred {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

ActionId played(const Transcript& transcript, AgentView agent, std::size_t t) {
  const RoundRecord& r = transcript.round(t);
  if (agent.index >= r.actions.size()) {
    throw InvalidArgument("transcript round " + std::to_string(t) + " has no action for agent " +
                          std::to_string(agent.index));
  }
  return r.actions[agent.index];
}

bool member(const AgentSpec& spec, ActionId b, std::span<const double> y, double lambda) {
  for (std::size_t j = 0; j < spec.num_constraints(); ++j) {
    if (evaluate_constraint(spec, j, b, y) > -lambda + kFeasibilityTolerance) return false;
  }
  return true;
}

// Per-agent tables for O(1) interval queries: prefix sums of counterfactual
// utilities split by played action, and range-max of the per-round worst
// constraint value of each action.
class IntervalTables {
 public:
  IntervalTables(const Transcript& transcript, AgentView agent)
      : horizon_(transcript.length()), actions_(agent.spec.num_actions()) {
    prefix_.assign(actions_ * actions_ * (horizon_ + 1), 0.0);
    std::vector<Vector> worst(actions_, Vector(horizon_, kNegInf));
    for (std::size_t t = 1; t <= horizon_; ++t) {
      const Vector& y = transcript.round(t).outcome;
      const ActionId a_t = played(transcript, agent, t);
      for (ActionId a = 0; a < actions_; ++a) {
        for (ActionId b = 0; b < actions_; ++b) {
          double step = a == a_t ? evaluate_utility(agent.spec, b, y) : 0.0;
          prefix(a, b, t) = prefix(a, b, t - 1) + step;
        }
      }
      for (ActionId b = 0; b < actions_; ++b) {
        for (std::size_t j = 0; j < agent.spec.num_constraints(); ++j) {
          worst[b][t - 1] = std::max(worst[b][t - 1], evaluate_constraint(agent.spec, j, b, y));
        }
      }
    }
    // Sparse tables: level[l][b][t] = max of worst[b] over [t, t + 2^l).
    levels_.push_back(std::move(worst));
    for (std::size_t width = 2; width <= horizon_; width *= 2) {
      const auto& prev = levels_.back();
      std::vector<Vector> next(actions_, Vector(horizon_, kNegInf));
      for (ActionId b = 0; b < actions_; ++b) {
        for (std::size_t t = 0; t + width <= horizon_; ++t) {
          next[b][t] = std::max(prev[b][t], prev[b][t + width / 2]);
        }
      }
      levels_.push_back(std::move(next));
    }
  }

  // Benchmark utility sum_a max_{b in B} sum_{t in [s,e], a_t=a} u(b, y_t);
  // nullopt when B is empty.
  std::optional<double> benchmark_value(std::size_t s, std::size_t e, double lambda) const {
    std::vector<ActionId> bench;
    for (ActionId b = 0; b < actions_; ++b) {
      if (range_worst(b, s, e) <= -lambda + kFeasibilityTolerance) bench.push_back(b);
    }
    if (bench.empty()) return std::nullopt;
    double total = 0.0;
    for (ActionId a = 0; a < actions_; ++a) {
      double best = kNegInf;
      for (ActionId b : bench) best = std::max(best, segment(a, b, s, e));
      total += best;
    }
    return total;
  }

  double realized(std::size_t s, std::size_t e) const {
    double total = 0.0;
    for (ActionId a = 0; a < actions_; ++a) total += segment(a, a, s, e);
    return total;
  }

 private:
  double& prefix(ActionId a, ActionId b, std::size_t t) {
    return prefix_[(a * actions_ + b) * (horizon_ + 1) + t];
  }
  double prefix(ActionId a, ActionId b, std::size_t t) const {
    return prefix_[(a * actions_ + b) * (horizon_ + 1) + t];
  }
  double segment(ActionId a, ActionId b, std::size_t s, std::size_t e) const {
    return prefix(a, b, e) - prefix(a, b, s - 1);
  }
  double range_worst(ActionId b, std::size_t s, std::size_t e) const {
    const std::size_t len = e - s + 1;
    std::size_t level = 0;
    while ((std::size_t{2} << level) <= len) ++level;
    const std::size_t width = std::size_t{1} << level;
    return std::max(levels_[level][b][s - 1], levels_[level][b][e - width]);
  }

  std::size_t horizon_;
  std::size_t actions_;
  Vector prefix_;
  std::vector<std::vector<Vector>> levels_;
};

void add_scaled(Vector& acc, std::span<const double> p, std::span<const double> y, double w) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * (p[i] - y[i]);
}

void finish(std::vector<EventBias>& biases) {
  for (EventBias& b : biases) {
    b.bias = 0.0;
    for (double v : b.signed_sum) b.bias = std::max(b.bias, std::abs(v));
  }
}

}  // namespace

CcvResult ccv(const Transcript& transcript, AgentView agent,
              std::span<const std::size_t> rounds) {
  CcvResult out;
  out.per_constraint.assign(agent.spec.num_constraints(), 0.0);
  for (std::size_t t : rounds) {
    const ActionId a = played(transcript, agent, t);
    for (std::size_t j = 0; j < agent.spec.num_constraints(); ++j) {
      out.per_constraint[j] += evaluate_constraint(agent.spec, j, a, transcript.round(t).outcome);
    }
  }
  if (!out.per_constraint.empty()) {
    out.max = *std::max_element(out.per_constraint.begin(), out.per_constraint.end());
  }
  return out;
}

BenchmarkSet benchmark_set(const Transcript& transcript, AgentView agent,
                           std::span<const std::size_t> rounds, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidArgument("benchmark margin must be >= 0");
  BenchmarkSet out;
  out.margin = lambda;
  for (ActionId b = 0; b < agent.spec.num_actions(); ++b) {
    bool ok = true;
    for (std::size_t t : rounds) {
      if (!member(agent.spec, b, transcript.round(t).outcome, lambda)) {
        ok = false;
        break;
      }
    }
    if (ok) out.actions.push_back(b);
  }
  return out;
}

std::optional<double> external_regret(const Transcript& transcript, AgentView agent,
                                      std::span<const std::size_t> rounds, double lambda) {
  const BenchmarkSet bench = benchmark_set(transcript, agent, rounds, lambda);
  if (bench.empty()) return std::nullopt;
  double realized = 0.0;
  for (std::size_t t : rounds) {
    realized += evaluate_utility(agent.spec, played(transcript, agent, t), transcript.round(t).outcome);
  }
  double best = kNegInf;
  for (ActionId b : bench.actions) {
    double total = 0.0;
    for (std::size_t t : rounds) total += evaluate_utility(agent.spec, b, transcript.round(t).outcome);
    best = std::max(best, total);
  }
  return best - realized;
}

std::optional<double> swap_regret(const Transcript& transcript, AgentView agent,
                                  std::span<const std::size_t> rounds, double lambda) {
  const BenchmarkSet bench = benchmark_set(transcript, agent, rounds, lambda);
  if (bench.empty()) return std::nullopt;
  const std::size_t n_actions = agent.spec.num_actions();
  // gain[a][b] = sum_{t in S, a_t = a} (u(b, y_t) - u(a, y_t))
  std::vector<Vector> gain(n_actions, Vector(n_actions, 0.0));
  std::vector<bool> was_played(n_actions, false);
  for (std::size_t t : rounds) {
    const ActionId a = played(transcript, agent, t);
    const Vector& y = transcript.round(t).outcome;
    was_played[a] = true;
    const double base = evaluate_utility(agent.spec, a, y);
    for (ActionId b : bench.actions) gain[a][b] += evaluate_utility(agent.spec, b, y) - base;
  }
  double total = 0.0;
  for (ActionId a = 0; a < n_actions; ++a) {
    if (!was_played[a]) continue;
    double best = kNegInf;
    for (ActionId b : bench.actions) best = std::max(best, gain[a][b]);
    total += best;
  }
  return total;
}

AdaptiveRegret adaptive_regret(const Transcript& transcript, AgentView agent,
                               std::span<const IntervalRounds> intervals,
                               const MarginPolicy& policy, std::size_t threads) {
  const IntervalTables tables(transcript, agent);
  const std::size_t horizon = transcript.length();
  std::vector<std::optional<double>> values(intervals.size());
  parallel_for(intervals.size(), threads, [&](std::size_t k) {
    const std::size_t s = intervals[k].first;
    const std::size_t e = std::min(intervals[k].last, horizon);
    if (s == 0 || s > e) return;
    const auto bench = tables.benchmark_value(s, e, policy.margin(e - s + 1));
    if (bench) values[k] = *bench - tables.realized(s, e);
  });
  AdaptiveRegret out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] && (!out.value || *values[k] > *out.value)) {
      out.value = values[k];
      out.witness = IntervalRounds{intervals[k].first, std::min(intervals[k].last, horizon)};
    }
  }
  return out;
}

DynamicRegret dynamic_benchmark_dp(const Transcript& transcript, AgentView agent,
                                   std::size_t change_budget, const MarginPolicy& policy,
                                   std::size_t dp_cap) {
  const std::size_t horizon = transcript.length();
  if (horizon > dp_cap) {
    throw CapExceeded("dynamic benchmark DP over T = " + std::to_string(horizon) +
                      " exceeds cap " + std::to_string(dp_cap));
  }
  DynamicRegret out;
  if (horizon == 0) {
    out.benchmark = 0.0;
    out.regret = 0.0;
    return out;
  }
  const IntervalTables tables(transcript, agent);
  // segval[s][e] for 1 <= s <= e <= T.
  std::vector<Vector> segval(horizon + 1, Vector(horizon + 1, kNegInf));
  for (std::size_t s = 1; s <= horizon; ++s) {
    for (std::size_t e = s; e <= horizon; ++e) {
      if (auto v = tables.benchmark_value(s, e, policy.margin(e - s + 1))) segval[s][e] = *v;
    }
  }
  const std::size_t max_segments = std::min(change_budget + 1, horizon);
  // best[k][e]: best value covering [1, e] with exactly k segments.
  std::vector<Vector> best(max_segments + 1, Vector(horizon + 1, kNegInf));
  std::vector<std::vector<std::size_t>> start(max_segments + 1,
                                              std::vector<std::size_t>(horizon + 1, 0));
  best[0][0] = 0.0;
  for (std::size_t k = 1; k <= max_segments; ++k) {
    for (std::size_t e = k; e <= horizon; ++e) {
      for (std::size_t s = k; s <= e; ++s) {
        if (best[k - 1][s - 1] == kNegInf || segval[s][e] == kNegInf) continue;
        const double v = best[k - 1][s - 1] + segval[s][e];
        if (v > best[k][e]) {
          best[k][e] = v;
          start[k][e] = s;
        }
      }
    }
  }
  std::size_t best_k = 0;
  for (std::size_t k = 1; k <= max_segments; ++k) {
    if (best[k][horizon] > kNegInf && (best_k == 0 || best[k][horizon] > best[best_k][horizon])) {
      best_k = k;
    }
  }
  if (best_k == 0) return out;
  out.benchmark = best[best_k][horizon];
  out.regret = *out.benchmark - tables.realized(1, horizon);
  for (std::size_t k = best_k, e = horizon; k > 0; --k) {
    const std::size_t s = start[k][e];
    out.segment_starts.push_back(s);
    e = s - 1;
  }
  std::reverse(out.segment_starts.begin(), out.segment_starts.end());
  return out;
}

std::vector<EventBias> calibration_bias(const Transcript& transcript,
                                        const EventRegistry& registry,
                                        std::span<const AgentSpec> agents,
                                        std::span<const SubsequenceSpec> subseqs,
                                        const DecisionRuleConfig& rule) {
  const std::size_t dim = transcript.header.dim;
  std::vector<EventBias> out(registry.size(), EventBias{Vector(dim, 0.0), 0.0, 0.0});
  for (const RoundRecord& r : transcript.rounds) {
    const auto active = active_subsequences(subseqs, r.t, r.feature);
    if (active.empty()) continue;
    const EventProfile profile = event_profile(agents, r.prediction, rule);
    for (std::size_t n = 0; n < agents.size(); ++n) {
      for (std::size_t type = 0; type < registry.num_types(n); ++type) {
        if (!profile.fires[n][type]) continue;
        for (std::size_t s : active) {
          EventBias& b = out[registry.index_of_type(n, type, s)];
          add_scaled(b.signed_sum, r.prediction, r.outcome, 1.0);
          b.activation += 1.0;
        }
      }
    }
  }
  finish(out);
  return out;
}

std::vector<EventBias> expected_calibration_bias(const Transcript& transcript,
                                                 const EventRegistry& registry,
                                                 std::span<const AgentSpec> agents,
                                                 std::span<const SubsequenceSpec> subseqs,
                                                 const DecisionRuleConfig& rule) {
  const std::size_t dim = transcript.header.dim;
  std::vector<EventBias> out(registry.size(), EventBias{Vector(dim, 0.0), 0.0, 0.0});
  for (const RoundRecord& r : transcript.rounds) {
    const auto active = active_subsequences(subseqs, r.t, r.feature);
    if (active.empty()) continue;
    for (std::size_t k = 0; k < r.psi.size(); ++k) {
      const double prob = r.psi.probs[k];
      const Vector& p = r.psi.support[k];
      const EventProfile profile = event_profile(agents, p, rule);
      for (std::size_t n = 0; n < agents.size(); ++n) {
        for (std::size_t type = 0; type < registry.num_types(n); ++type) {
          if (!profile.fires[n][type]) continue;
          for (std::size_t s : active) {
            EventBias& b = out[registry.index_of_type(n, type, s)];
            add_scaled(b.signed_sum, p, r.outcome, prob);
            b.activation += prob;
          }
        }
      }
    }
  }
  finish(out);
  return out;
}

std::vector<std::size_t> predicted_infeasible_counts(const Transcript& transcript,
                                                     const AgentSpec& agent, ActionId action,
                                                     std::span<const std::size_t> rounds,
                                                     double tol_eta) {
  std::vector<std::size_t> counts(agent.num_constraints(), 0);
  for (std::size_t t : rounds) {
    for (std::size_t j = 0; j < agent.num_constraints(); ++j) {
      if (predicted_infeasible(agent, j, action, transcript.round(t).prediction, tol_eta)) {
        ++counts[j];
      }
    }
  }
  return counts;
}

std::size_t empty_feasible_rounds(const Transcript& transcript, const AgentSpec& agent,
                                  std::span<const std::size_t> rounds,
                                  const DecisionRuleConfig& rule) {
  std::size_t count = 0;
  for (std::size_t t : rounds) {
    if (cbr(agent, transcript.round(t).prediction, rule).feasible_set_empty) ++count;
  }
  return count;
}

}  // namespace omnipred
