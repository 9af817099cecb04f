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

#ifndef OMNIPRED_CONFIG_H_
#define OMNIPRED_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "omnipred/adversary.h"
#include "omnipred/cbr.h"
#include "omnipred/domain.h"
#include "omnipred/events.h"
#include "omnipred/grid.h"
#include "omnipred/metrics.h"
#include "omnipred/subsequence.h"

namespace omnipred {

inline constexpr int kConfigSchemaVersion = 1;

// Horizon-independent description of a subsequence (or family of them).
struct SubsequenceFamily {
  enum class Kind {
    kWhole,         // [1, T]
    kDyadic,        // dyadic cover of [1, T]
    kAllIntervals,  // every interval, T <= 200
    kInterval,      // [first, last]
    kFeature,       // x_t == feature
    kFeaturesAll,   // one subsequence per feature id
    kModulo,        // t mod modulus == residue
    kExplicit,      // listed rounds
  };
  Kind kind = Kind::kWhole;
  std::size_t first = 1;
  std::size_t last = 1;
  FeatureId feature = 0;
  std::size_t modulus = 1;
  std::size_t residue = 0;
  std::vector<std::size_t> rounds;
};

struct AdversaryConfig {
  // Atoms have the base dimension d; the pinned coordinate is appended when
  // augmentation is on.
  AdversarySpec spec;
  // Piecewise only: when non-empty, segment k starts at floor(f_k T) + 1,
  // overriding the absolute starts in spec.
  std::vector<double> segment_fractions;
};

struct OutputPaths {
  std::string transcript;
  std::string registry;
  std::string diagnostics;
  std::string metrics;
};

struct RunConfig {
  std::size_t dim = 1;  // base outcome dimension d
  std::size_t horizon = 0;
  bool augment = false;
  std::optional<double> grid_spacing;  // default_grid_spacing(T) when unset
  std::optional<double> lr_eta;        // default_learning_rate when unset
  std::size_t feature_alphabet = 1;
  std::vector<AgentSpec> agents;       // rows of length model_dim()
  std::vector<SubsequenceFamily> subsequences;
  MarginPolicy margin = MarginPolicy::PowerLaw();
  double tol_eta = 0.0;
  std::optional<double> tol_eta_exponent;  // tol_eta = T^exponent when set
  AdversaryConfig adversary;
  std::uint64_t seed_adversary = 0;
  std::uint64_t seed_sampling = 0;
  OutputPaths output;
  std::size_t registry_cap = kDefaultRegistryCap;
  std::size_t grid_cap = kDefaultGridCap;
  std::size_t dp_cap = kDefaultDpCap;
  std::size_t dynamic_budget = 4;
  double envelope_c0 = 1.0;
  double envelope_delta = 0.05;
  std::size_t threads = 1;

  std::size_t model_dim() const { return dim + (augment ? 1 : 0); }
};

// Strict: unknown fields, wrong types and inconsistent values throw
// InvalidArgument naming the offending field.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Cross-field checks (dimensions, agents, adversary, caps).
void validate_run_config(const RunConfig& config);

// Copy with a different horizon and seeds.
RunConfig with_horizon(const RunConfig& config, std::size_t horizon);
RunConfig with_seeds(const RunConfig& config, std::uint64_t seed_adversary,
                     std::uint64_t seed_sampling);

// Per-horizon instantiations.
std::vector<SubsequenceSpec> materialize_subsequences(const RunConfig& config);
AdversarySpec materialize_adversary(const RunConfig& config);
GridSpec make_grid(const RunConfig& config);
DecisionRuleConfig make_rule(const RunConfig& config);

}  // namespace omnipred

#endif  // OMNIPRED_CONFIG_H_
