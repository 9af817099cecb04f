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

#ifndef OMNIPRED_TRANSCRIPT_H_
#define OMNIPRED_TRANSCRIPT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "omnipred/domain.h"
#include "omnipred/subsequence.h"

namespace omnipred {

struct TranscriptHeader {
  std::size_t dim = 0;      // includes the pinned coordinate when augmented
  std::size_t horizon = 0;  // configured T
  double spacing = 0.0;     // grid spacing h
  std::uint64_t seed_adversary = 0;
  std::uint64_t seed_sampling = 0;
  std::size_t num_agents = 0;
  bool augmented = false;

  friend bool operator==(const TranscriptHeader&, const TranscriptHeader&) = default;
};

struct RoundRecord {
  std::size_t t = 0;
  FeatureId feature = 0;
  PredictionDistribution psi;
  Vector prediction;
  std::vector<ActionId> actions;  // one per agent
  Vector outcome;
};

// Append-only record of a run. Rounds are 1..n contiguously.
struct Transcript {
  TranscriptHeader header;
  std::vector<RoundRecord> rounds;

  std::size_t length() const { return rounds.size(); }
  const RoundRecord& round(std::size_t t) const { return rounds.at(t - 1); }

  // First n rounds (checkpoint metrics).
  Transcript prefix(std::size_t n) const;
};

// Throws InvalidArgument on non-contiguous rounds, wrong dimensions, action
// counts that do not match num_agents, or predictions off the h-grid.
void validate_transcript(const Transcript& transcript);

// Rounds t (1-based) of the transcript that belong to S.
std::vector<std::size_t> resolve_rounds(const SubsequenceSpec& subseq,
                                        const Transcript& transcript);

}  // namespace omnipred

#endif  // OMNIPRED_TRANSCRIPT_H_
