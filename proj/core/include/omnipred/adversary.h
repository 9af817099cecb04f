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

#ifndef OMNIPRED_ADVERSARY_H_
#define OMNIPRED_ADVERSARY_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "omnipred/domain.h"
#include "omnipred/rng.h"

namespace omnipred {

// Finite outcome distribution.
struct AtomMixture {
  std::vector<Vector> atoms;
  Vector probs;
};

struct IidOutcomes {
  AtomMixture mixture;
};

struct PiecewiseSegment {
  std::size_t first = 1;  // first round of the segment
  AtomMixture mixture;
};

struct PiecewiseStationary {
  std::vector<PiecewiseSegment> segments;  // ascending, segments[0].first == 1
};

// Shared atoms; probabilities move linearly from start_probs (t = 1) to
// end_probs (t = T).
struct DriftingOutcomes {
  std::vector<Vector> atoms;
  Vector start_probs;
  Vector end_probs;
};

// Heuristic stressor: each round plays the atom that pushes the tracked
// event's running bias further in its current direction. Not a worst-case
// adversary.
struct BiasChaser {
  std::vector<Vector> atoms;
  std::size_t tracked_event = 0;
};

using OutcomeModel = std::variant<IidOutcomes, PiecewiseStationary, DriftingOutcomes, BiasChaser>;

struct FeatureSchedule {
  enum class Kind { kConstant, kCyclic, kRandom };
  Kind kind = Kind::kConstant;
  std::size_t alphabet = 1;
};

struct AdversarySpec {
  OutcomeModel outcomes;
  FeatureSchedule features;
};

// Throws InvalidArgument for atoms outside [0,1]^dim, bad probability vectors,
// or piecewise segments that do not partition [1, horizon].
void validate_adversary(const AdversarySpec& spec, std::size_t dim, std::size_t horizon);

std::string adversary_kind_name(const AdversarySpec& spec);

// Completed round visible to the adversary when committing the next one.
struct HistoryEntry {
  std::size_t t = 0;
  FeatureId feature = 0;
  Vector prediction;
  Vector outcome;
};

// Tracked-event indicator E(t, x, p) for BiasChaser.
using EventOracle = std::function<bool(std::size_t, FeatureId, std::span<const double>)>;

// Y_t, fixed at commitment time.
class OutcomeSampler {
 public:
  explicit OutcomeSampler(AtomMixture mixture) : mixture_(std::move(mixture)) {}

  // One inverse-CDF draw; consumes exactly one engine output.
  Vector sample(Rng& rng) const;
  const AtomMixture& distribution() const { return mixture_; }

 private:
  AtomMixture mixture_;
};

struct Commitment {
  FeatureId feature = 0;
  OutcomeSampler sampler;
};

class Adversary {
 public:
  Adversary(AdversarySpec spec, std::size_t dim, std::size_t horizon,
            EventOracle tracked_event = {});

  // x_t and Y_t for round t from rounds < t only. history.size() must be t-1.
  Commitment commit_round(std::size_t t, std::span<const HistoryEntry> history, Rng& rng) const;

  const AdversarySpec& spec() const { return spec_; }

 private:
  AtomMixture mixture_at(std::size_t t, std::span<const HistoryEntry> history) const;

  AdversarySpec spec_;
  std::size_t dim_;
  std::size_t horizon_;
  EventOracle tracked_event_;
};

struct FeasibilityEntry {
  std::size_t agent = 0;
  std::size_t segment = 0;
  bool feasible = false;
  std::vector<ActionId> witnesses;  // actions with c_j(a, y) <= -lambda on every atom
};

struct FeasibilityReport {
  std::vector<FeasibilityEntry> entries;

  bool all_feasible() const;
};

// Per agent and per stationary segment: does some action satisfy every
// constraint with margin lambda on every atom that can occur?
FeasibilityReport strict_feasibility_check(const AdversarySpec& spec,
                                           std::span<const AgentSpec> agents, double lambda);

}  // namespace omnipred

#endif  // OMNIPRED_ADVERSARY_H_
