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

#ifndef OMNIPRED_ORACLE_CHECK_H_
#define OMNIPRED_ORACLE_CHECK_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "omnipred/domain.h"
#include "omnipred/rng.h"

namespace omnipred {

struct OracleCheckOptions {
  std::size_t cbr_instances = 1000;
  std::size_t swap_instances = 500;
  std::size_t dynamic_instances = 100;
  std::size_t minmax_instances = 50;
  double minmax_step = 0.01;
  double minmax_tolerance = 0.05;
  std::uint64_t seed = 20260101;
};

struct OracleCheckResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t mismatches = 0;
  double max_abs_diff = 0.0;
  std::string first_mismatch;
};

// Random primary-vs-oracle comparisons: cbr, swap decomposition, dynamic DP
// (exact to 1e-9) and the minimax LP (within minmax_tolerance).
std::vector<OracleCheckResult> run_oracle_checks(const OracleCheckOptions& options);

// Random agent with valid norms. With 'coarse', weights are multiples of
// 0.25, which makes utility ties and boundary constraint values common.
AgentSpec random_agent(Rng& rng, std::size_t actions, std::size_t constraints, std::size_t dim,
                       bool coarse);

}  // namespace omnipred

#endif  // OMNIPRED_ORACLE_CHECK_H_
