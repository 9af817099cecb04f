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

#ifndef OMNIPRED_LP_H_
#define OMNIPRED_LP_H_

#include <cstddef>
#include <vector>

#include "omnipred/domain.h"

namespace omnipred {

// minimize c^T x  subject to  A x = b, x >= 0.  A is dense, row-major.
struct LpProblem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;
  Vector b;
  Vector c;

  double& at(std::size_t r, std::size_t col) { return a[r * cols + col]; }
};

struct LpSolution {
  enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

  Status status = Status::kOptimal;
  Vector x;
  double objective = 0.0;
  std::size_t iterations = 0;
};

// Two-phase dense tableau simplex. Dantzig pricing, switching to Bland's rule
// after a run of degenerate pivots. Sized for few rows and many columns.
LpSolution solve_lp(const LpProblem& problem, std::size_t max_iterations = 50'000);

}  // namespace omnipred

#endif  // OMNIPRED_LP_H_
