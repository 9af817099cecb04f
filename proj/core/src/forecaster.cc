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

#include "omnipred/forecaster.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "omnipred/lp.h"

namespace omnipred {
namespace {

constexpr double kSupportCutoff = 1e-12;

void check_coefficients(const GridSpec& grid, std::span<const Vector> coefficients) {
  if (coefficients.size() != grid.size()) {
    throw InvalidArgument("minmax: one coefficient row per grid point required");
  }
  for (const Vector& row : coefficients) {
    if (row.size() != grid.dim()) throw InvalidArgument("minmax: coefficient row dimension");
  }
}

}  // namespace

double default_learning_rate(std::size_t horizon, std::size_t dim, std::size_t num_events) {
  if (horizon == 0 || dim == 0 || num_events == 0) {
    throw InvalidArgument("default_learning_rate: horizon, dim and |E| must be positive");
  }
  const double experts = 2.0 * static_cast<double>(dim) * static_cast<double>(num_events);
  return std::sqrt(8.0 * std::log(experts) / static_cast<double>(horizon));
}

WeightState::WeightState(std::size_t num_events, std::size_t dim, double lr_eta)
    : num_events_(num_events), dim_(dim), lr_eta_(lr_eta), g_(num_events * dim, 0.0) {
  if (!(lr_eta > 0.0) || !std::isfinite(lr_eta)) {
    throw InvalidArgument("learning rate must be positive and finite");
  }
}

double WeightState::log_normalizer() const {
  if (g_.empty()) return 0.0;
  const double half = 0.5 * lr_eta_;
  double shift = 0.0;
  for (double g : g_) shift = std::max(shift, half * std::abs(g));
  double total = 0.0;
  for (double g : g_) total += std::exp(half * g - shift) + std::exp(-half * g - shift);
  return shift + std::log(total);
}

ExpertDistribution compute_expert_distribution(const WeightState& weights) {
  ExpertDistribution q;
  q.dim = weights.dim();
  const double log_z = weights.log_normalizer();
  const double half = 0.5 * weights.lr_eta();
  q.plus.reserve(weights.raw().size());
  q.minus.reserve(weights.raw().size());
  for (double g : weights.raw()) {
    q.plus.push_back(std::exp(half * g - log_z));
    q.minus.push_back(std::exp(-half * g - log_z));
  }
  return q;
}

double minmax_objective(const GridSpec& grid, std::span<const Vector> coefficients,
                        std::span<const double> grid_weights) {
  double value = 0.0;
  for (std::size_t i = 0; i < grid.dim(); ++i) {
    if (grid.is_pinned(i)) continue;
    double c = 0.0;
    double d = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (grid_weights[k] == 0.0) continue;
      const double coord = grid.point(k)[i];
      c += grid_weights[k] * coefficients[k][i] * coord;
      d += grid_weights[k] * coefficients[k][i];
    }
    value += c + std::max(0.0, -d);
  }
  return value;
}

MinmaxSolution solve_round_minmax(const GridSpec& grid,
                                  std::span<const Vector> coefficients) {
  check_coefficients(grid, coefficients);
  const std::size_t n_points = grid.size();
  std::vector<std::size_t> free_coords;
  for (std::size_t i = 0; i < grid.dim(); ++i) {
    if (!grid.is_pinned(i)) free_coords.push_back(i);
  }

  bool any_weight = false;
  for (const Vector& row : coefficients) {
    for (double a : row) any_weight = any_weight || a != 0.0;
  }
  MinmaxSolution out;
  if (!any_weight) {
    out.psi = PredictionDistribution::PointMass(grid.point(0));
    out.support_indices = {0};
    return out;
  }

  // Columns: psi_k, then (s_i, r_i) per free coordinate.
  const std::size_t f = free_coords.size();
  LpProblem lp;
  lp.rows = f + 1;
  lp.cols = n_points + 2 * f;
  lp.a.assign(lp.rows * lp.cols, 0.0);
  lp.b.assign(lp.rows, 0.0);
  lp.c.assign(lp.cols, 0.0);
  std::vector<Vector> points(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    points[k] = grid.point(k);
    double cost = 0.0;
    for (std::size_t r = 0; r < f; ++r) {
      const std::size_t i = free_coords[r];
      cost += coefficients[k][i] * points[k][i];
      lp.at(r, k) = coefficients[k][i];
    }
    lp.c[k] = cost;
    lp.at(f, k) = 1.0;
  }
  for (std::size_t r = 0; r < f; ++r) {
    lp.at(r, n_points + 2 * r) = 1.0;       // s_i
    lp.at(r, n_points + 2 * r + 1) = -1.0;  // r_i
    lp.c[n_points + 2 * r] = 1.0;
  }
  lp.b[f] = 1.0;

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpSolution::Status::kOptimal) {
    throw SolverError("minmax LP did not reach optimality");
  }
  out.lp_iterations = sol.iterations;

  Vector weights(n_points, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < n_points; ++k) {
    if (sol.x[k] > kSupportCutoff) {
      weights[k] = sol.x[k];
      total += sol.x[k];
    }
  }
  if (!(total > 0.0)) throw SolverError("minmax LP returned an empty distribution");
  for (std::size_t k = 0; k < n_points; ++k) {
    if (weights[k] == 0.0) continue;
    weights[k] /= total;
    out.support_indices.push_back(k);
    out.psi.support.push_back(points[k]);
    out.psi.probs.push_back(weights[k]);
  }
  out.game_value = minmax_objective(grid, coefficients, weights);
  return out;
}

MinmaxSolution solve_round_minmax(std::span<const ActiveEventWeights> events,
                                  const GridIndicator& fires, const GridSpec& grid) {
  std::vector<Vector> coefficients(grid.size(), Vector(grid.dim(), 0.0));
  for (std::size_t e = 0; e < events.size(); ++e) {
    if (events[e].plus.size() != grid.dim() || events[e].minus.size() != grid.dim()) {
      throw InvalidArgument("minmax: event weight dimension");
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (!fires(e, k)) continue;
      for (std::size_t i = 0; i < grid.dim(); ++i) {
        coefficients[k][i] += events[e].plus[i] - events[e].minus[i];
      }
    }
  }
  return solve_round_minmax(grid, coefficients);
}

Vector sample_prediction(const PredictionDistribution& psi, Rng& rng) {
  if (psi.probs.empty()) throw InvalidArgument("sample_prediction: empty distribution");
  const double u = uniform01(rng);
  double cumulative = 0.0;
  for (std::size_t k = 0; k < psi.probs.size(); ++k) {
    cumulative += psi.probs[k];
    if (u < cumulative) return psi.support[k];
  }
  // Rounding left u above the final partial sum.
  for (std::size_t k = psi.probs.size(); k-- > 0;) {
    if (psi.probs[k] > 0.0) return psi.support[k];
  }
  return psi.support.back();
}

void record_outcome(WeightState& weights, const PredictionDistribution& psi,
                    std::span<const SupportFiring> active, std::span<const double> y) {
  if (y.size() != weights.dim()) throw InvalidArgument("record_outcome: outcome dimension");
  if (!in_unit_cube(y)) throw InvalidArgument("record_outcome: outcome outside [0,1]^d");
  for (const SupportFiring& ev : active) {
    if (ev.fires.size() != psi.size()) {
      throw InvalidArgument("record_outcome: firing pattern does not match support");
    }
    for (std::size_t i = 0; i < weights.dim(); ++i) {
      double inc = 0.0;
      for (std::size_t k = 0; k < psi.size(); ++k) {
        if (ev.fires[k]) inc += psi.probs[k] * (psi.support[k][i] - y[i]);
      }
      weights.add(ev.event, i, inc);
    }
  }
}

Forecaster::Forecaster(std::vector<AgentSpec> agents, std::vector<SubsequenceSpec> subseqs,
                       GridSpec grid, const ForecasterOptions& options,
                       std::size_t registry_cap)
    : agents_(std::move(agents)),
      subseqs_(std::move(subseqs)),
      grid_(std::move(grid)),
      options_(options),
      registry_(EventRegistry::build(agents_, subseqs_, options.rule, registry_cap)),
      weights_(registry_.size(), grid_.dim(),
               options.lr_eta > 0.0
                   ? options.lr_eta
                   : default_learning_rate(std::max<std::size_t>(options.horizon, 1),
                                           grid_.dim(), std::max<std::size_t>(registry_.size(), 1))),
      rng_(options.sampling_seed),
      activations_(registry_.size(), 0) {
  for (const AgentSpec& agent : agents_) {
    if (auto report = validate_agent_spec(agent, grid_.dim()); !report.ok()) {
      throw InvalidArgument(report.problems.front());
    }
  }
  grid_profiles_.reserve(grid_.size());
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    grid_profiles_.push_back(event_profile(agents_, grid_.point(k), options_.rule));
  }
}

const RoundOutput& Forecaster::predict(std::size_t t, FeatureId x) {
  if (awaiting_outcome_) {
    throw ProtocolError("round " + std::to_string(t) + " requested before the outcome of round " +
                        std::to_string(next_round_) + " was recorded");
  }
  if (t != next_round_) {
    throw ProtocolError("expected round " + std::to_string(next_round_) + ", got " +
                        std::to_string(t));
  }
  current_active_ = active_subsequences(subseqs_, t, x);

  // Net weight per (agent, type, coord), summed over active subsequences.
  const std::size_t dim = grid_.dim();
  std::vector<std::vector<Vector>> net(agents_.size());
  std::size_t active_events = 0;
  if (!current_active_.empty()) {
    const double log_z = weights_.log_normalizer();
    const double half = 0.5 * weights_.lr_eta();
    for (std::size_t n = 0; n < agents_.size(); ++n) {
      net[n].assign(registry_.num_types(n), Vector(dim, 0.0));
      for (std::size_t type = 0; type < registry_.num_types(n); ++type) {
        for (std::size_t s : current_active_) {
          const std::size_t e = registry_.index_of_type(n, type, s);
          ++active_events;
          for (std::size_t i = 0; i < dim; ++i) {
            const double g = weights_.cumulative(e, i);
            net[n][type][i] += std::exp(half * g - log_z) - std::exp(-half * g - log_z);
          }
        }
      }
    }
  }

  std::vector<Vector> coefficients(grid_.size(), Vector(dim, 0.0));
  if (active_events > 0) {
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      const EventProfile& profile = grid_profiles_[k];
      for (std::size_t n = 0; n < agents_.size(); ++n) {
        for (std::size_t type = 0; type < registry_.num_types(n); ++type) {
          if (!profile.fires[n][type]) continue;
          for (std::size_t i = 0; i < dim; ++i) coefficients[k][i] += net[n][type][i];
        }
      }
    }
  }

  MinmaxSolution solution = solve_round_minmax(grid_, coefficients);
  current_ = RoundOutput{};
  current_.t = t;
  current_.prediction = sample_prediction(solution.psi, rng_);
  current_.psi = std::move(solution.psi);
  current_.game_value = solution.game_value;
  current_.active_events = active_events;
  current_.lp_iterations = solution.lp_iterations;
  current_support_ = std::move(solution.support_indices);
  awaiting_outcome_ = true;
  return current_;
}

void Forecaster::observe(std::span<const double> y) {
  if (!awaiting_outcome_) {
    throw ProtocolError("outcome recorded with no open round");
  }
  if (y.size() != grid_.dim() || !in_unit_cube(y)) {
    throw InvalidArgument("outcome must lie in [0,1]^" + std::to_string(grid_.dim()));
  }
  if (grid_.pinned_last() && y.back() != 1.0) {
    throw InvalidArgument("augmented outcome must have its last coordinate equal to 1");
  }
  const std::size_t dim = grid_.dim();
  std::size_t realized = 0;
  for (std::size_t k = 0; k < current_support_.size(); ++k) {
    if (current_.psi.support[k] == current_.prediction) realized = k;
  }
  for (std::size_t n = 0; n < agents_.size(); ++n) {
    for (std::size_t type = 0; type < registry_.num_types(n); ++type) {
      Vector increment(dim, 0.0);
      bool fires_somewhere = false;
      for (std::size_t k = 0; k < current_support_.size(); ++k) {
        if (!grid_profiles_[current_support_[k]].fires[n][type]) continue;
        fires_somewhere = true;
        const double prob = current_.psi.probs[k];
        for (std::size_t i = 0; i < dim; ++i) {
          increment[i] += prob * (current_.psi.support[k][i] - y[i]);
        }
      }
      const bool fired_realized = grid_profiles_[current_support_[realized]].fires[n][type] != 0;
      if (!fires_somewhere) continue;
      for (std::size_t s : current_active_) {
        const std::size_t e = registry_.index_of_type(n, type, s);
        for (std::size_t i = 0; i < dim; ++i) weights_.add(e, i, increment[i]);
        if (fired_realized) ++activations_[e];
      }
    }
  }
  awaiting_outcome_ = false;
  ++next_round_;
}

}  // namespace omnipred
