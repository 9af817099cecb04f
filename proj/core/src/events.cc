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

#include "omnipred/events.h"

#include <algorithm>

namespace omnipred {

std::size_t event_subsequence(const EventKey& key) {
  return std::visit([](const auto& e) { return e.subseq; }, key);
}

std::size_t event_agent(const EventKey& key) {
  return std::visit([](const auto& e) { return e.agent; }, key);
}

std::size_t types_per_agent(const AgentSpec& agent) {
  return agent.num_actions() * (1 + agent.num_constraints());
}

std::size_t expected_registry_size(std::span<const AgentSpec> agents,
                                   std::size_t num_subsequences) {
  std::size_t total = 0;
  for (const AgentSpec& agent : agents) {
    total += agent.num_actions() * num_subsequences +
             agent.num_constraints() * agent.num_actions() * num_subsequences;
  }
  return total;
}

EventRegistry EventRegistry::build(std::span<const AgentSpec> agents,
                                   std::span<const SubsequenceSpec> subseqs,
                                   const DecisionRuleConfig& rule,
                                   std::size_t cap) {
  validate_rule_config(rule);
  if (subseqs.empty()) throw InvalidArgument("event registry needs at least one subsequence");
  const std::size_t total = expected_registry_size(agents, subseqs.size());
  if (total > cap) {
    throw CapExceeded("event registry would hold " + std::to_string(total) +
                      " events, cap is " + std::to_string(cap));
  }
  EventRegistry reg;
  reg.num_subseqs_ = subseqs.size();
  reg.keys_.reserve(total);
  for (std::size_t n = 0; n < agents.size(); ++n) {
    const AgentSpec& agent = agents[n];
    reg.agent_offset_.push_back(reg.keys_.size());
    reg.agent_types_.push_back(types_per_agent(agent));
    reg.agent_constraints_.push_back(agent.num_constraints());
    for (ActionId a = 0; a < agent.num_actions(); ++a) {
      for (std::size_t s = 0; s < subseqs.size(); ++s) {
        reg.keys_.push_back(DecisionEvent{n, a, s});
      }
      for (std::size_t j = 0; j < agent.num_constraints(); ++j) {
        for (std::size_t s = 0; s < subseqs.size(); ++s) {
          reg.keys_.push_back(InfeasibilityEvent{n, j, a, s});
        }
      }
    }
  }
  return reg;
}

std::size_t EventRegistry::decision_index(std::size_t agent, ActionId action,
                                          std::size_t subseq) const {
  const std::size_t type = action * (1 + agent_constraints_.at(agent));
  return index_of_type(agent, type, subseq);
}

std::size_t EventRegistry::infeasibility_index(std::size_t agent, std::size_t j,
                                               ActionId action,
                                               std::size_t subseq) const {
  const std::size_t type = action * (1 + agent_constraints_.at(agent)) + 1 + j;
  return index_of_type(agent, type, subseq);
}

std::vector<std::string> EventRegistry::dump(
    std::span<const AgentSpec> agents,
    std::span<const SubsequenceSpec> subseqs) const {
  std::vector<std::string> lines;
  lines.reserve(keys_.size());
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    std::string line = std::to_string(i) + "\t";
    if (const auto* d = std::get_if<DecisionEvent>(&keys_[i])) {
      line += "decision\t" + agents[d->agent].id + "\t-\t" + std::to_string(d->action) +
              "\t" + subseqs[d->subseq].id();
    } else {
      const auto& e = std::get<InfeasibilityEvent>(keys_[i]);
      line += "infeasibility\t" + agents[e.agent].id + "\t" + std::to_string(e.constraint) +
              "\t" + std::to_string(e.action) + "\t" + subseqs[e.subseq].id();
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

EventProfile event_profile(std::span<const AgentSpec> agents,
                           std::span<const double> p,
                           const DecisionRuleConfig& rule) {
  EventProfile profile;
  profile.cbr_action.reserve(agents.size());
  profile.fires.reserve(agents.size());
  for (const AgentSpec& agent : agents) {
    const std::size_t stride = 1 + agent.num_constraints();
    std::vector<std::uint8_t> fires(types_per_agent(agent), 0);
    const ActionId chosen = cbr(agent, p, rule).action;
    fires[chosen * stride] = 1;
    for (ActionId a = 0; a < agent.num_actions(); ++a) {
      for (std::size_t j = 0; j < agent.num_constraints(); ++j) {
        fires[a * stride + 1 + j] = predicted_infeasible(agent, j, a, p, rule.tol_eta) ? 1 : 0;
      }
    }
    profile.cbr_action.push_back(chosen);
    profile.fires.push_back(std::move(fires));
  }
  return profile;
}

std::vector<std::size_t> active_subsequences(std::span<const SubsequenceSpec> subseqs,
                                             std::size_t t, FeatureId x) {
  std::vector<std::size_t> active;
  for (std::size_t s = 0; s < subseqs.size(); ++s) {
    if (subseqs[s].contains(t, x)) active.push_back(s);
  }
  return active;
}

std::vector<std::pair<std::size_t, bool>> evaluate_active_events(
    const EventRegistry& registry, std::span<const SubsequenceSpec> subseqs,
    std::size_t t, FeatureId x, std::span<const double> p,
    std::span<const AgentSpec> agents, const DecisionRuleConfig& rule) {
  std::vector<std::pair<std::size_t, bool>> out;
  const std::vector<std::size_t> active = active_subsequences(subseqs, t, x);
  if (active.empty()) return out;
  const EventProfile profile = event_profile(agents, p, rule);
  for (std::size_t n = 0; n < agents.size(); ++n) {
    for (std::size_t type = 0; type < registry.num_types(n); ++type) {
      for (std::size_t s : active) {
        out.emplace_back(registry.index_of_type(n, type, s), profile.fires[n][type] != 0);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace omnipred
