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

#include "omnipred/subsequence.h"

#include <algorithm>
#include <utility>

namespace omnipred {

SubsequenceSpec::SubsequenceSpec(std::string id, Kind kind)
    : id_(std::move(id)), kind_(std::move(kind)) {
  if (const auto* iv = std::get_if<IntervalRounds>(&kind_)) {
    if (iv->first == 0 || iv->last < iv->first) {
      throw InvalidArgument("interval subsequence needs 1 <= first <= last");
    }
  } else if (const auto* mod = std::get_if<TimeModulo>(&kind_)) {
    if (mod->modulus == 0 || mod->residue >= mod->modulus) {
      throw InvalidArgument("modulo subsequence needs modulus > residue >= 0");
    }
  } else if (auto* ex = std::get_if<ExplicitRounds>(&kind_)) {
    std::sort(ex->rounds.begin(), ex->rounds.end());
    ex->rounds.erase(std::unique(ex->rounds.begin(), ex->rounds.end()), ex->rounds.end());
    if (!ex->rounds.empty() && ex->rounds.front() == 0) {
      throw InvalidArgument("explicit subsequence rounds are 1-based");
    }
  }
}

SubsequenceSpec SubsequenceSpec::Interval(std::size_t first, std::size_t last) {
  return SubsequenceSpec(
      "interval[" + std::to_string(first) + "," + std::to_string(last) + "]",
      IntervalRounds{first, last});
}

SubsequenceSpec SubsequenceSpec::Feature(FeatureId feature) {
  return SubsequenceSpec("feature=" + std::to_string(feature), FeatureMatch{feature});
}

SubsequenceSpec SubsequenceSpec::Modulo(std::size_t modulus, std::size_t residue) {
  return SubsequenceSpec(
      "mod" + std::to_string(modulus) + "=" + std::to_string(residue),
      TimeModulo{modulus, residue});
}

SubsequenceSpec SubsequenceSpec::Explicit(std::vector<std::size_t> rounds) {
  std::string id = "explicit{";
  std::sort(rounds.begin(), rounds.end());
  for (std::size_t i = 0; i < rounds.size() && i < 4; ++i) {
    if (i) id += ",";
    id += std::to_string(rounds[i]);
  }
  if (rounds.size() > 4) id += ",...#" + std::to_string(rounds.size());
  id += "}";
  return SubsequenceSpec(std::move(id), ExplicitRounds{std::move(rounds)});
}

bool SubsequenceSpec::contains(std::size_t t, FeatureId x) const {
  struct Visitor {
    std::size_t t;
    FeatureId x;
    bool operator()(const IntervalRounds& iv) const { return t >= iv.first && t <= iv.last; }
    bool operator()(const FeatureMatch& fm) const { return x == fm.feature; }
    bool operator()(const TimeModulo& mod) const { return t % mod.modulus == mod.residue; }
    bool operator()(const ExplicitRounds& ex) const {
      return std::binary_search(ex.rounds.begin(), ex.rounds.end(), t);
    }
  };
  return std::visit(Visitor{t, x}, kind_);
}

std::vector<SubsequenceSpec> all_intervals(std::size_t horizon) {
  if (horizon > kAllIntervalsMaxHorizon) {
    throw CapExceeded("all-intervals family requested for T = " +
                      std::to_string(horizon) + " > " +
                      std::to_string(kAllIntervalsMaxHorizon));
  }
  std::vector<SubsequenceSpec> out;
  out.reserve(horizon * (horizon + 1) / 2);
  for (std::size_t first = 1; first <= horizon; ++first) {
    for (std::size_t last = first; last <= horizon; ++last) {
      out.push_back(SubsequenceSpec::Interval(first, last));
    }
  }
  return out;
}

std::vector<SubsequenceSpec> dyadic_intervals(std::size_t horizon) {
  std::vector<SubsequenceSpec> out;
  if (horizon == 0) return out;
  for (std::size_t width = 1;; width *= 2) {
    for (std::size_t start = 0; start < horizon; start += width) {
      std::size_t last = std::min(start + width, horizon);
      out.push_back(SubsequenceSpec(
          "dyadic[" + std::to_string(start + 1) + "," + std::to_string(start + width) + "]",
          IntervalRounds{start + 1, last}));
    }
    if (width >= horizon) break;
  }
  return out;
}

std::vector<SubsequenceSpec> feature_partition(std::size_t alphabet) {
  std::vector<SubsequenceSpec> out;
  for (std::size_t f = 0; f < alphabet; ++f) {
    out.push_back(SubsequenceSpec::Feature(static_cast<FeatureId>(f)));
  }
  return out;
}

}  // namespace omnipred
