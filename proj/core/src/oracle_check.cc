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

#include "omnipred/oracle_check.h"

#include <cmath>
#include <optional>
#include <sstream>

#include "omnipred/cbr.h"
#include "omnipred/forecaster.h"
#include "omnipred/grid.h"
#include "omnipred/metrics.h"
#include "omnipred/oracles.h"

namespace omnipred {
namespace {

double coarse_or_fine(Rng& rng, double lo, double hi, bool coarse) {
  const double u = lo + (hi - lo) * uniform01(rng);
  return coarse ? std::round(u * 4.0) / 4.0 : u;
}

Vector random_point(Rng& rng, std::size_t dim, bool coarse) {
  Vector y(dim);
  for (double& v : y) v = coarse_or_fine(rng, 0.0, 1.0, coarse);
  return y;
}

// Scale v so that its l1 norm is at most 1, keeping quarter steps exact.
void clamp_norm(Vector& v, bool coarse) {
  double n = 0.0;
  for (double x : v) n += std::abs(x);
  if (n <= 1.0) return;
  for (double& x : v) {
    x /= n;
    if (coarse) x = std::trunc(x * 4.0) / 4.0;
  }
}

Transcript random_transcript(Rng& rng, const AgentSpec& agent, std::size_t T, std::size_t dim,
                             bool coarse) {
  Transcript tr;
  tr.header.dim = dim;
  tr.header.horizon = T;
  tr.header.spacing = 0.25;
  tr.header.num_agents = 1;
  for (std::size_t t = 1; t <= T; ++t) {
    RoundRecord r;
    r.t = t;
    r.prediction = random_point(rng, dim, true);
    r.psi = PredictionDistribution::PointMass(r.prediction);
    r.actions = {uniform_index(rng, agent.num_actions())};
    r.outcome = random_point(rng, dim, coarse);
    tr.rounds.push_back(std::move(r));
  }
  return tr;
}

bool same(const std::optional<double>& a, const std::optional<double>& b, double tol,
          double& diff) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  diff = std::abs(*a - *b);
  return diff <= tol;
}

}  // namespace

AgentSpec random_agent(Rng& rng, std::size_t actions, std::size_t constraints, std::size_t dim,
                       bool coarse) {
  AgentSpec agent;
  agent.id = "random";
  for (std::size_t a = 0; a < actions; ++a) {
    Vector w(dim);
    for (double& x : w) x = coarse_or_fine(rng, 0.0, 1.0, coarse) / static_cast<double>(dim);
    clamp_norm(w, coarse);
    agent.utility.push_back(std::move(w));
  }
  for (std::size_t j = 0; j < constraints; ++j) {
    std::vector<Vector> rows;
    for (std::size_t a = 0; a < actions; ++a) {
      Vector v(dim);
      // Skewed negative so that benchmarks are often non-empty.
      for (double& x : v) x = coarse_or_fine(rng, -1.0, 0.6, coarse) / static_cast<double>(dim);
      clamp_norm(v, coarse);
      rows.push_back(std::move(v));
    }
    agent.constraints.push_back(std::move(rows));
  }
  return agent;
}

std::vector<OracleCheckResult> run_oracle_checks(const OracleCheckOptions& options) {
  std::vector<OracleCheckResult> results;
  Rng rng(options.seed);

  {
    OracleCheckResult r{"cbr", options.cbr_instances, 0, 0.0, ""};
    for (std::size_t n = 0; n < options.cbr_instances; ++n) {
      const bool coarse = n % 2 == 0;
      const std::size_t A = 1 + uniform_index(rng, 8);
      const std::size_t J = uniform_index(rng, 4);
      const std::size_t d = 1 + uniform_index(rng, 4);
      const AgentSpec agent = random_agent(rng, A, J, d, coarse);
      const Vector p = random_point(rng, d, coarse);
      const DecisionRuleConfig rule{n % 3 == 0 ? 0.25 * static_cast<double>(uniform_index(rng, 3))
                                               : 0.0};
      const ActionId primary = cbr(agent, p, rule).action;
      const ActionId brute = oracles::brute_cbr(agent, p, rule);
      if (primary != brute) {
        if (r.mismatches++ == 0) {
          r.first_mismatch = "instance " + std::to_string(n) + ": cbr " + std::to_string(primary) +
                             " vs " + std::to_string(brute);
        }
      }
    }
    results.push_back(r);
  }

  {
    OracleCheckResult r{"swap_regret", options.swap_instances, 0, 0.0, ""};
    for (std::size_t n = 0; n < options.swap_instances; ++n) {
      const bool coarse = n % 2 == 0;
      const std::size_t A = 1 + uniform_index(rng, 3);
      const std::size_t J = uniform_index(rng, 3);
      const std::size_t d = 1 + uniform_index(rng, 3);
      const AgentSpec agent = random_agent(rng, A, J, d, coarse);
      const std::size_t T = 1 + uniform_index(rng, 30);
      const Transcript tr = random_transcript(rng, agent, T, d, coarse);
      std::vector<std::size_t> rounds;
      for (std::size_t t = 1; t <= T; ++t) {
        if (n % 4 != 0 || uniform01(rng) < 0.5) rounds.push_back(t);
      }
      const double lambda = 0.5 * uniform01(rng);
      double diff = 0.0;
      const auto primary = swap_regret(tr, AgentView{agent, 0}, rounds, lambda);
      const auto brute = oracles::brute_swap(tr, agent, 0, rounds, lambda);
      if (!same(primary, brute, 1e-9, diff)) {
        if (r.mismatches++ == 0) r.first_mismatch = "instance " + std::to_string(n);
      }
      r.max_abs_diff = std::max(r.max_abs_diff, diff);
    }
    results.push_back(r);
  }

  {
    OracleCheckResult r{"dynamic_dp", options.dynamic_instances, 0, 0.0, ""};
    for (std::size_t n = 0; n < options.dynamic_instances; ++n) {
      const bool coarse = n % 2 == 0;
      const std::size_t A = 1 + uniform_index(rng, 3);
      const std::size_t J = uniform_index(rng, 3);
      const std::size_t d = 1 + uniform_index(rng, 2);
      const AgentSpec agent = random_agent(rng, A, J, d, coarse);
      const std::size_t T = 1 + uniform_index(rng, oracles::kMaxDynamicHorizon);
      const Transcript tr = random_transcript(rng, agent, T, d, coarse);
      const std::size_t budget = uniform_index(rng, 5);
      const MarginPolicy policy = n % 3 == 0 ? MarginPolicy::Fixed(0.25 * uniform01(rng))
                                             : MarginPolicy::PowerLaw(-0.25);
      double d1 = 0.0, d2 = 0.0;
      const DynamicRegret primary = dynamic_benchmark_dp(tr, AgentView{agent, 0}, budget, policy);
      const auto brute = oracles::brute_dynamic(tr, agent, 0, budget, policy);
      if (!same(primary.benchmark, brute.benchmark, 1e-9, d1) ||
          !same(primary.regret, brute.regret, 1e-9, d2)) {
        if (r.mismatches++ == 0) r.first_mismatch = "instance " + std::to_string(n);
      }
      r.max_abs_diff = std::max({r.max_abs_diff, d1, d2});
    }
    results.push_back(r);
  }

  {
    OracleCheckResult r{"minmax", options.minmax_instances, 0, 0.0, ""};
    const GridSpec grid(1, 0.5);
    const double points[3] = {0.0, 0.5, 1.0};
    for (std::size_t n = 0; n < options.minmax_instances; ++n) {
      const std::size_t E = 1 + uniform_index(rng, oracles::kMaxMinmaxEvents);
      std::vector<oracles::MinmaxEvent> events(E);
      double total = 0.0;
      for (auto& e : events) {
        e.fires.resize(3);
        for (std::size_t k = 0; k < 3; ++k) e.fires[k] = uniform01(rng) < 0.6;
        e.q_plus = uniform01(rng);
        e.q_minus = uniform01(rng);
        total += e.q_plus + e.q_minus;
      }
      std::vector<Vector> coefficients(3, Vector(1, 0.0));
      for (auto& e : events) {
        e.q_plus /= total;
        e.q_minus /= total;
        for (std::size_t k = 0; k < 3; ++k) {
          if (e.fires[k]) coefficients[k][0] += e.q_plus - e.q_minus;
        }
      }
      const double lp = solve_round_minmax(grid, coefficients).game_value;
      const double brute = oracles::brute_minmax(points, events, options.minmax_step).value;
      const double diff = std::abs(lp - brute);
      r.max_abs_diff = std::max(r.max_abs_diff, diff);
      if (diff > options.minmax_tolerance) {
        if (r.mismatches++ == 0) {
          std::ostringstream msg;
          msg << "instance " << n << ": lp " << lp << " vs brute " << brute;
          r.first_mismatch = msg.str();
        }
      }
    }
    results.push_back(r);
  }
  return results;
}

}  // namespace omnipred
