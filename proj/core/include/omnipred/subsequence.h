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

#ifndef OMNIPRED_SUBSEQUENCE_H_
#define OMNIPRED_SUBSEQUENCE_H_

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "omnipred/domain.h"

namespace omnipred {

// Rounds are 1-based throughout.
struct IntervalRounds {
  std::size_t first = 1;
  std::size_t last = 1;
};
struct FeatureMatch {
  FeatureId feature = 0;
};
struct TimeModulo {
  std::size_t modulus = 1;
  std::size_t residue = 0;
};
struct ExplicitRounds {
  std::vector<std::size_t> rounds;  // sorted, unique
};

// A subsequence S with indicator h_S(t, x). Membership depends only on the
// round index and the feature.
class SubsequenceSpec {
 public:
  using Kind = std::variant<IntervalRounds, FeatureMatch, TimeModulo, ExplicitRounds>;

  SubsequenceSpec(std::string id, Kind kind);

  static SubsequenceSpec Interval(std::size_t first, std::size_t last);
  static SubsequenceSpec Feature(FeatureId feature);
  static SubsequenceSpec Modulo(std::size_t modulus, std::size_t residue);
  static SubsequenceSpec Explicit(std::vector<std::size_t> rounds);

  bool contains(std::size_t t, FeatureId x) const;

  const std::string& id() const { return id_; }
  const Kind& kind() const { return kind_; }

 private:
  std::string id_;
  Kind kind_;
};

// Largest horizon for which the all-intervals family may be built.
inline constexpr std::size_t kAllIntervalsMaxHorizon = 200;

// Every [t1, t2] with 1 <= t1 <= t2 <= horizon, ordered by (t1, t2).
// Throws CapExceeded above kAllIntervalsMaxHorizon.
std::vector<SubsequenceSpec> all_intervals(std::size_t horizon);

// Dyadic cover [k 2^l + 1, (k+1) 2^l] for l = 0..ceil(log2 horizon), truncated
// to the horizon. Ordered by level, then k.
std::vector<SubsequenceSpec> dyadic_intervals(std::size_t horizon);

// One FeatureMatch subsequence per feature id in [0, alphabet).
std::vector<SubsequenceSpec> feature_partition(std::size_t alphabet);

}  // namespace omnipred

#endif  // OMNIPRED_SUBSEQUENCE_H_
