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

#include "omnipred/adversary.h"

#include <algorithm>
#include <cmath>

namespace omnipred {
namespace {

void validate_mixture(const AtomMixture& m, std::size_t dim, const std::string& where) {
  if (m.atoms.empty()) throw InvalidArgument(where + ": outcome support is empty");
  if (m.atoms.size() != m.probs.size()) {
    throw InvalidArgument(where + ": atom/probability count mismatch");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < m.atoms.size(); ++k) {
    if (m.atoms[k].size() != dim || !in_unit_cube(m.atoms[k])) {
      throw InvalidArgument(where + ": atom " + std::to_string(k) + " is not in [0,1]^" +
                            std::to_string(dim));
    }
    if (!(m.probs[k] >= 0.0)) throw InvalidArgument(where + ": negative probability");
    total += m.probs[k];
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument(where + ": probabilities must sum to 1");
}

void validate_atoms(const std::vector<Vector>& atoms, std::size_t dim, const std::string& where) {
  AtomMixture m{atoms, Vector(atoms.size(), atoms.empty() ? 0.0 : 1.0 / atoms.size())};
  validate_mixture(m, dim, where);
}

// Atoms that can occur, grouped by stationary segment.
std::vector<std::vector<Vector>> support_by_segment(const AdversarySpec& spec) {
  std::vector<std::vector<Vector>> out;
  auto positive = [](const std::vector<Vector>& atoms, const Vector& a, const Vector* b) {
    std::vector<Vector> kept;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      if (a[k] > 0.0 || (b && (*b)[k] > 0.0)) kept.push_back(atoms[k]);
    }
    return kept;
  };
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, IidOutcomes>) {
          out.push_back(positive(model.mixture.atoms, model.mixture.probs, nullptr));
        } else if constexpr (std::is_same_v<T, PiecewiseStationary>) {
          for (const auto& seg : model.segments) {
            out.push_back(positive(seg.mixture.atoms, seg.mixture.probs, nullptr));
          }
        } else if constexpr (std::is_same_v<T, DriftingOutcomes>) {
          out.push_back(positive(model.atoms, model.start_probs, &model.end_probs));
        } else {
          out.push_back(model.atoms);
        }
      },
      spec.outcomes);
  for (const auto& atoms : out) {
    if (atoms.empty()) throw InvalidArgument("adversary segment has no outcome support");
  }
  return out;
}

}  // namespace

void validate_adversary(const AdversarySpec& spec, std::size_t dim, std::size_t horizon) {
  if (spec.features.alphabet == 0) throw InvalidArgument("feature alphabet must be >= 1");
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, IidOutcomes>) {
          validate_mixture(model.mixture, dim, "iid adversary");
        } else if constexpr (std::is_same_v<T, PiecewiseStationary>) {
          if (model.segments.empty() || model.segments.front().first != 1) {
            throw InvalidArgument("piecewise adversary: first segment must start at round 1");
          }
          for (std::size_t k = 0; k < model.segments.size(); ++k) {
            if (k > 0 && model.segments[k].first <= model.segments[k - 1].first) {
              throw InvalidArgument("piecewise adversary: segment starts must increase");
            }
            if (horizon > 0 && model.segments[k].first > horizon) {
              throw InvalidArgument("piecewise adversary: segment " + std::to_string(k) +
                                    " starts after the horizon");
            }
            validate_mixture(model.segments[k].mixture, dim,
                             "piecewise adversary segment " + std::to_string(k));
          }
        } else if constexpr (std::is_same_v<T, DriftingOutcomes>) {
          validate_mixture({model.atoms, model.start_probs}, dim, "drifting adversary start");
          validate_mixture({model.atoms, model.end_probs}, dim, "drifting adversary end");
        } else {
          validate_atoms(model.atoms, dim, "bias-chaser adversary");
        }
      },
      spec.outcomes);
}

std::string adversary_kind_name(const AdversarySpec& spec) {
  switch (spec.outcomes.index()) {
    case 0: return "iid";
    case 1: return "piecewise";
    case 2: return "drifting";
    default: return "bias_chaser(heuristic)";
  }
}

Vector OutcomeSampler::sample(Rng& rng) const {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  for (std::size_t k = 0; k < mixture_.probs.size(); ++k) {
    cumulative += mixture_.probs[k];
    if (u < cumulative) return mixture_.atoms[k];
  }
  for (std::size_t k = mixture_.probs.size(); k-- > 0;) {
    if (mixture_.probs[k] > 0.0) return mixture_.atoms[k];
  }
  return mixture_.atoms.back();
}

Adversary::Adversary(AdversarySpec spec, std::size_t dim, std::size_t horizon,
                     EventOracle tracked_event)
    : spec_(std::move(spec)), dim_(dim), horizon_(horizon),
      tracked_event_(std::move(tracked_event)) {
  validate_adversary(spec_, dim_, horizon_);
  if (std::holds_alternative<BiasChaser>(spec_.outcomes) && !tracked_event_) {
    throw InvalidArgument("bias-chaser adversary needs a tracked-event oracle");
  }
}

AtomMixture Adversary::mixture_at(std::size_t t, std::span<const HistoryEntry> history) const {
  return std::visit(
      [&](const auto& model) -> AtomMixture {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, IidOutcomes>) {
          return model.mixture;
        } else if constexpr (std::is_same_v<T, PiecewiseStationary>) {
          std::size_t k = 0;
          while (k + 1 < model.segments.size() && model.segments[k + 1].first <= t) ++k;
          return model.segments[k].mixture;
        } else if constexpr (std::is_same_v<T, DriftingOutcomes>) {
          const double w = horizon_ > 1 ? static_cast<double>(t - 1) / static_cast<double>(horizon_ - 1)
                                        : 0.0;
          AtomMixture m{model.atoms, Vector(model.atoms.size(), 0.0)};
          for (std::size_t k = 0; k < m.probs.size(); ++k) {
            m.probs[k] = (1.0 - w) * model.start_probs[k] + w * model.end_probs[k];
          }
          return m;
        } else {
          Vector bias(dim_, 0.0);
          for (const HistoryEntry& h : history) {
            if (!tracked_event_(h.t, h.feature, h.prediction)) continue;
            for (std::size_t i = 0; i < dim_; ++i) bias[i] += h.prediction[i] - h.outcome[i];
          }
          std::size_t best = 0;
          double best_score = dot(bias, model.atoms[0]);
          for (std::size_t k = 1; k < model.atoms.size(); ++k) {
            const double score = dot(bias, model.atoms[k]);
            if (score < best_score) {
              best = k;
              best_score = score;
            }
          }
          return AtomMixture{{model.atoms[best]}, {1.0}};
        }
      },
      spec_.outcomes);
}

Commitment Adversary::commit_round(std::size_t t, std::span<const HistoryEntry> history,
                                   Rng& rng) const {
  if (t == 0 || (horizon_ > 0 && t > horizon_)) {
    throw InvalidArgument("adversary asked for round " + std::to_string(t) + " outside [1, " +
                          std::to_string(horizon_) + "]");
  }
  if (history.size() != t - 1) {
    throw ProtocolError("adversary history for round " + std::to_string(t) + " has " +
                        std::to_string(history.size()) + " entries");
  }
  FeatureId feature = 0;
  switch (spec_.features.kind) {
    case FeatureSchedule::Kind::kConstant: break;
    case FeatureSchedule::Kind::kCyclic:
      feature = static_cast<FeatureId>((t - 1) % spec_.features.alphabet);
      break;
    case FeatureSchedule::Kind::kRandom:
      feature = static_cast<FeatureId>(uniform_index(rng, spec_.features.alphabet));
      break;
  }
  return Commitment{feature, OutcomeSampler(mixture_at(t, history))};
}

bool FeasibilityReport::all_feasible() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.feasible; });
}

FeasibilityReport strict_feasibility_check(const AdversarySpec& spec,
                                           std::span<const AgentSpec> agents, double lambda) {
  const auto segments = support_by_segment(spec);
  FeasibilityReport report;
  for (std::size_t n = 0; n < agents.size(); ++n) {
    const AgentSpec& agent = agents[n];
    for (std::size_t s = 0; s < segments.size(); ++s) {
      FeasibilityEntry entry{n, s, false, {}};
      for (ActionId a = 0; a < agent.num_actions(); ++a) {
        bool ok = true;
        for (const Vector& y : segments[s]) {
          for (std::size_t j = 0; j < agent.num_constraints() && ok; ++j) {
            ok = evaluate_constraint(agent, j, a, y) <= -lambda + kFeasibilityTolerance;
          }
          if (!ok) break;
        }
        if (ok) entry.witnesses.push_back(a);
      }
      entry.feasible = !entry.witnesses.empty();
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

}  // namespace omnipred
