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

#include "omnipred/oracles.h"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "omnipred/errors.h"

namespace omnipred::oracles {
namespace {

double inner(const Vector& w, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * y[i];
  return s;
}

std::vector<ActionId> benchmark(const Transcript& tr, const AgentSpec& agent,
                                std::span<const std::size_t> rounds, double lambda) {
  std::vector<ActionId> out;
  for (ActionId b = 0; b < agent.utility.size(); ++b) {
    bool member = true;
    for (std::size_t t : rounds) {
      for (const auto& cj : agent.constraints) {
        if (inner(cj[b], tr.rounds[t - 1].outcome) > -lambda + 1e-9) member = false;
      }
    }
    if (member) out.push_back(b);
  }
  return out;
}

// Best total over maps A -> B by explicit enumeration of |B|^|A| maps.
double best_map_total(const Transcript& tr, const AgentSpec& agent, std::size_t agent_index,
                      std::span<const std::size_t> rounds, const std::vector<ActionId>& bench) {
  const std::size_t A = agent.utility.size();
  std::size_t maps = 1;
  for (std::size_t a = 0; a < A; ++a) maps *= bench.size();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> digits(A);
  for (std::size_t m = 0; m < maps; ++m) {
    std::size_t code = m;
    for (std::size_t a = 0; a < A; ++a) {
      digits[a] = code % bench.size();
      code /= bench.size();
    }
    double total = 0.0;
    for (std::size_t t : rounds) {
      const RoundRecord& r = tr.rounds[t - 1];
      total += inner(agent.utility[bench[digits[r.actions[agent_index]]]], r.outcome);
    }
    best = std::max(best, total);
  }
  return best;
}

double realized(const Transcript& tr, const AgentSpec& agent, std::size_t agent_index,
                std::span<const std::size_t> rounds) {
  double total = 0.0;
  for (std::size_t t : rounds) {
    const RoundRecord& r = tr.rounds[t - 1];
    total += inner(agent.utility[r.actions[agent_index]], r.outcome);
  }
  return total;
}

}  // namespace

ActionId brute_cbr(const AgentSpec& agent, std::span<const double> p,
                   const DecisionRuleConfig& rule) {
  bool found = false;
  ActionId best = 0;
  double best_u = 0.0;
  for (ActionId a = 0; a < agent.utility.size(); ++a) {
    bool feasible = true;
    for (const auto& cj : agent.constraints) {
      if (inner(cj[a], p) > rule.tol_eta + 1e-9) feasible = false;
    }
    if (!feasible) continue;
    const double u = inner(agent.utility[a], p);
    if (!found || u > best_u) {
      found = true;
      best = a;
      best_u = u;
    }
  }
  return found ? best : 0;
}

std::optional<double> brute_swap(const Transcript& transcript, const AgentSpec& agent,
                                 std::size_t agent_index, std::span<const std::size_t> rounds,
                                 double lambda) {
  if (agent.utility.size() > kMaxSwapActions) {
    throw CapExceeded("brute_swap: more than " + std::to_string(kMaxSwapActions) + " actions");
  }
  const auto bench = benchmark(transcript, agent, rounds, lambda);
  if (bench.empty()) return std::nullopt;
  return best_map_total(transcript, agent, agent_index, rounds, bench) -
         realized(transcript, agent, agent_index, rounds);
}

MinmaxSearch brute_minmax(std::span<const double> grid_points,
                          std::span<const MinmaxEvent> events, double step) {
  if (grid_points.size() > kMaxMinmaxGrid || grid_points.empty()) {
    throw CapExceeded("brute_minmax: grid must have 1.." + std::to_string(kMaxMinmaxGrid) +
                      " points");
  }
  if (events.size() > kMaxMinmaxEvents) {
    throw CapExceeded("brute_minmax: more than " + std::to_string(kMaxMinmaxEvents) + " events");
  }
  if (!(step > 0.0 && step <= 1.0)) throw InvalidArgument("brute_minmax: step must be in (0, 1]");
  const long n = std::lround(1.0 / step);
  const std::size_t K = grid_points.size();

  auto value_at = [&](const std::vector<double>& psi) {
    // Linear in y: C - D y, maximized at y = 0 or y = 1.
    double c = 0.0, d = 0.0;
    for (const MinmaxEvent& e : events) {
      const double net = e.q_plus - e.q_minus;
      for (std::size_t k = 0; k < K; ++k) {
        if (!e.fires[k]) continue;
        c += net * psi[k] * grid_points[k];
        d += net * psi[k];
      }
    }
    return std::max(c, c - d);
  };

  MinmaxSearch best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<double> psi(K, 0.0);
  // Enumerate compositions of n into K parts.
  std::vector<long> parts(K, 0);
  auto visit = [&](auto&& self, std::size_t k, long left) -> void {
    if (k + 1 == K) {
      parts[k] = left;
      for (std::size_t i = 0; i < K; ++i) psi[i] = static_cast<double>(parts[i]) / n;
      const double v = value_at(psi);
      if (v < best.value) {
        best.value = v;
        best.psi = psi;
      }
      return;
    }
    for (long m = 0; m <= left; ++m) {
      parts[k] = m;
      self(self, k + 1, left - m);
    }
  };
  visit(visit, 0, n);
  return best;
}

DynamicSearch brute_dynamic(const Transcript& transcript, const AgentSpec& agent,
                            std::size_t agent_index, std::size_t change_budget,
                            const MarginPolicy& policy) {
  const std::size_t T = transcript.rounds.size();
  if (T > kMaxDynamicHorizon) {
    throw CapExceeded("brute_dynamic: T above " + std::to_string(kMaxDynamicHorizon));
  }
  if (agent.utility.size() > kMaxSwapActions) {
    throw CapExceeded("brute_dynamic: more than " + std::to_string(kMaxSwapActions) + " actions");
  }
  DynamicSearch out;
  if (T == 0) return out;
  std::vector<std::size_t> everything;
  for (std::size_t t = 1; t <= T; ++t) everything.push_back(t);

  std::optional<double> best;
  // Bit c of 'cuts' set: a new segment starts at round c + 2.
  for (unsigned cuts = 0; cuts < (1u << (T - 1)); ++cuts) {
    if (static_cast<std::size_t>(std::popcount(cuts)) > change_budget) continue;
    double total = 0.0;
    bool feasible = true;
    std::size_t start = 1;
    for (std::size_t t = 1; t <= T && feasible; ++t) {
      const bool ends = t == T || ((cuts >> (t - 1)) & 1u);
      if (!ends) continue;
      std::vector<std::size_t> seg;
      for (std::size_t s = start; s <= t; ++s) seg.push_back(s);
      const auto bench = benchmark(transcript, agent, seg, policy.margin(seg.size()));
      if (bench.empty()) {
        feasible = false;
      } else {
        total += best_map_total(transcript, agent, agent_index, seg, bench);
      }
      start = t + 1;
    }
    if (feasible && (!best || total > *best)) best = total;
  }
  if (best) {
    out.benchmark = best;
    out.regret = *best - realized(transcript, agent, agent_index, everything);
  }
  return out;
}

}  // namespace omnipred::oracles
