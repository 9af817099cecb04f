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

#include "omnipred/lp.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace omnipred {
namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kCostEps = 1e-11;
constexpr std::size_t kDegenerateStreakForBland = 50;

// Tableau over columns [0, width) plus a right-hand side column.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t width)
      : rows_(rows), width_(width), cells_(rows * (width + 1), 0.0),
        cost_(width + 1, 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return cells_[r * (width_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, width_); }
  double& cost(std::size_t c) { return cost_[c]; }
  double objective() const { return -cost_[width_]; }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  std::size_t rows() const { return rows_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= width_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      eliminate(&cells_[r * (width_ + 1)], pr, pc);
    }
    eliminate(cost_.data(), pr, pc);
    basis_[pr] = pc;
  }

  // Sets the cost row to reduced costs of the given objective for the
  // current basis.
  void price(const Vector& objective, std::size_t active_width) {
    for (std::size_t c = 0; c <= width_; ++c) cost_[c] = c < active_width ? objective[c] : 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = basis_[r] < active_width ? objective[basis_[r]] : 0.0;
      if (cb == 0.0) continue;
      const double* row = &cells_[r * (width_ + 1)];
      for (std::size_t c = 0; c <= width_; ++c) cost_[c] -= cb * row[c];
    }
  }

  void drop_row(std::size_t r) {
    cells_.erase(cells_.begin() + r * (width_ + 1), cells_.begin() + (r + 1) * (width_ + 1));
    basis_.erase(basis_.begin() + r);
    --rows_;
  }

  // Simplex iterations restricted to entering columns [0, active_width).
  LpSolution::Status optimize(std::size_t active_width, std::size_t max_iterations,
                              std::size_t& iterations) {
    std::size_t degenerate_streak = 0;
    while (true) {
      const bool bland = degenerate_streak >= kDegenerateStreakForBland;
      std::size_t enter = active_width;
      double best = -kCostEps;
      for (std::size_t c = 0; c < active_width; ++c) {
        if (cost_[c] < best) {
          enter = c;
          if (bland) break;
          best = cost_[c];
        }
      }
      if (enter == active_width) return LpSolution::Status::kOptimal;
      if (iterations >= max_iterations) return LpSolution::Status::kIterationLimit;

      std::size_t leave = rows_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double coef = at(r, enter);
        if (coef <= kPivotEps) continue;
        const double ratio = rhs(r) / coef;
        if (ratio < best_ratio - 1e-15 ||
            (ratio <= best_ratio + 1e-15 && leave < rows_ && basis_[r] < basis_[leave])) {
          best_ratio = ratio;
          leave = r;
        }
      }
      if (leave == rows_) return LpSolution::Status::kUnbounded;
      degenerate_streak = best_ratio <= 1e-15 ? degenerate_streak + 1 : 0;
      pivot(leave, enter);
      ++iterations;
    }
  }

 private:
  void eliminate(double* row, std::size_t pr, std::size_t pc) {
    const double factor = row[pc];
    if (factor == 0.0) return;
    const double* prow = &cells_[pr * (width_ + 1)];
    for (std::size_t c = 0; c <= width_; ++c) row[c] -= factor * prow[c];
    row[pc] = 0.0;
  }

  std::size_t rows_;
  std::size_t width_;
  std::vector<double> cells_;
  std::vector<double> cost_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, std::size_t max_iterations) {
  const std::size_t m = problem.rows;
  const std::size_t n = problem.cols;
  if (problem.a.size() != m * n || problem.b.size() != m || problem.c.size() != n) {
    throw InvalidArgument("solve_lp: inconsistent problem dimensions");
  }
  LpSolution solution;

  // Phase 1: artificial column n + r for every row, rows flipped so b >= 0.
  Tableau tab(m, n + m);
  for (std::size_t r = 0; r < m; ++r) {
    const double sign = problem.b[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) tab.at(r, c) = sign * problem.a[r * n + c];
    tab.at(r, n + r) = 1.0;
    tab.rhs(r) = sign * problem.b[r];
    tab.basis(r) = n + r;
  }
  Vector phase1(n + m, 0.0);
  for (std::size_t r = 0; r < m; ++r) phase1[n + r] = 1.0;
  tab.price(phase1, n + m);
  auto status = tab.optimize(n + m, max_iterations, solution.iterations);
  if (status == LpSolution::Status::kIterationLimit) {
    solution.status = status;
    return solution;
  }
  if (tab.objective() > 1e-9) {
    solution.status = LpSolution::Status::kInfeasible;
    return solution;
  }

  // Drive zero-level artificials out of the basis; rows that cannot pivot
  // onto an original column are redundant.
  for (std::size_t r = 0; r < tab.rows();) {
    if (tab.basis(r) < n) {
      ++r;
      continue;
    }
    std::size_t col = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (std::abs(tab.at(r, c)) > 1e-9) {
        col = c;
        break;
      }
    }
    if (col == n) {
      tab.drop_row(r);
    } else {
      tab.pivot(r, col);
      ++r;
    }
  }

  // Phase 2 over original columns only.
  tab.price(problem.c, n);
  status = tab.optimize(n, max_iterations, solution.iterations);
  solution.status = status;
  if (status != LpSolution::Status::kOptimal) return solution;

  solution.x.assign(n, 0.0);
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    if (tab.basis(r) < n) solution.x[tab.basis(r)] = std::max(0.0, tab.rhs(r));
  }
  solution.objective = 0.0;
  for (std::size_t c = 0; c < n; ++c) solution.objective += problem.c[c] * solution.x[c];
  return solution;
}

}  // namespace omnipred
