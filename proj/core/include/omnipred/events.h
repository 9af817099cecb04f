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

#ifndef OMNIPRED_EVENTS_H_
#define OMNIPRED_EVENTS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "omnipred/cbr.h"
#include "omnipred/domain.h"
#include "omnipred/subsequence.h"

namespace omnipred {

// 1[t in S, CBR_n(p) = a]
struct DecisionEvent {
  std::size_t agent = 0;
  ActionId action = 0;
  std::size_t subseq = 0;

  friend bool operator==(const DecisionEvent&, const DecisionEvent&) = default;
};

// 1[t in S, c_j(a, p) > tol_eta]
struct InfeasibilityEvent {
  std::size_t agent = 0;
  std::size_t constraint = 0;
  ActionId action = 0;
  std::size_t subseq = 0;

  friend bool operator==(const InfeasibilityEvent&, const InfeasibilityEvent&) = default;
};

using EventKey = std::variant<DecisionEvent, InfeasibilityEvent>;

std::size_t event_subsequence(const EventKey& key);
std::size_t event_agent(const EventKey& key);

// Per-agent event "types" strip the subsequence gate. For an agent with J
// constraints, action a owns types a(1+J) (decision) and a(1+J)+1+j
// (infeasibility of constraint j).
std::size_t types_per_agent(const AgentSpec& agent);

// Closed form: sum over agents of |A| |S| + J |A| |S|.
std::size_t expected_registry_size(std::span<const AgentSpec> agents,
                                   std::size_t num_subsequences);

// Default cap on registry size for desk-scale runs.
inline constexpr std::size_t kDefaultRegistryCap = 1'000'000;

// Ordered calibration-event family. Ordering: agent, then action, then
// (decision, constraint 0, ..., constraint J-1), then subsequence.
class EventRegistry {
 public:
  static EventRegistry build(std::span<const AgentSpec> agents,
                             std::span<const SubsequenceSpec> subseqs,
                             const DecisionRuleConfig& rule,
                             std::size_t cap = kDefaultRegistryCap);

  std::size_t size() const { return keys_.size(); }
  const EventKey& key(std::size_t index) const { return keys_.at(index); }
  const std::vector<EventKey>& keys() const { return keys_; }

  std::size_t num_agents() const { return agent_offset_.size(); }
  std::size_t num_subsequences() const { return num_subseqs_; }
  std::size_t num_types(std::size_t agent) const { return agent_types_.at(agent); }

  std::size_t index_of_type(std::size_t agent, std::size_t type,
                            std::size_t subseq) const {
    return agent_offset_[agent] + type * num_subseqs_ + subseq;
  }
  std::size_t decision_index(std::size_t agent, ActionId action,
                             std::size_t subseq) const;
  std::size_t infeasibility_index(std::size_t agent, std::size_t j,
                                  ActionId action, std::size_t subseq) const;

  // One tab-separated line per event:
  // index, kind, agent, constraint ("-" for decisions), action, subsequence id.
  std::vector<std::string> dump(std::span<const AgentSpec> agents,
                                std::span<const SubsequenceSpec> subseqs) const;

 private:
  std::vector<EventKey> keys_;
  std::vector<std::size_t> agent_offset_;
  std::vector<std::size_t> agent_types_;
  std::vector<std::size_t> agent_constraints_;
  std::size_t num_subseqs_ = 0;
};

// Indicator of every event type at one prediction, for every agent.
struct EventProfile {
  std::vector<ActionId> cbr_action;            // per agent
  std::vector<std::vector<std::uint8_t>> fires;  // [agent][type]
};

EventProfile event_profile(std::span<const AgentSpec> agents,
                           std::span<const double> p,
                           const DecisionRuleConfig& rule);

// Indices of subsequences with h_S(t, x) = 1, ascending.
std::vector<std::size_t> active_subsequences(std::span<const SubsequenceSpec> subseqs,
                                             std::size_t t, FeatureId x);

// Sparse evaluation: (event index, fired) for every event whose subsequence
// is active at (t, x), in index order. Inactive events are omitted.
std::vector<std::pair<std::size_t, bool>> evaluate_active_events(
    const EventRegistry& registry, std::span<const SubsequenceSpec> subseqs,
    std::size_t t, FeatureId x, std::span<const double> p,
    std::span<const AgentSpec> agents, const DecisionRuleConfig& rule);

}  // namespace omnipred

#endif  // OMNIPRED_EVENTS_H_
