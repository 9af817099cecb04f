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

#include "omnipred/grid.h"

#include <algorithm>
#include <cmath>

namespace omnipred {

double default_grid_spacing(std::size_t horizon) {
  // Smallest k with 2^k >= sqrt(T), i.e. 4^k >= T.
  int k = 0;
  while (k < 62 && (std::size_t{1} << (2 * k)) < horizon) ++k;
  const int clamped = std::clamp(k, 3, 6);
  return std::ldexp(1.0, -clamped);
}

GridSpec::GridSpec(std::size_t free_dims, double spacing, bool pinned_last,
                   std::size_t cap)
    : free_dims_(free_dims), spacing_(spacing), pinned_last_(pinned_last) {
  int exponent = 0;
  const double mantissa = std::frexp(spacing, &exponent);
  if (!(spacing > 0.0 && spacing <= 0.5) || mantissa != 0.5) {
    throw InvalidArgument("grid spacing must be 2^-k with k >= 1");
  }
  if (free_dims == 0) throw InvalidArgument("grid needs at least one free coordinate");
  steps_ = static_cast<std::size_t>(std::llround(1.0 / spacing));
  double count = std::pow(static_cast<double>(steps_ + 1), static_cast<double>(free_dims));
  if (count > static_cast<double>(cap)) {
    throw CapExceeded("grid with spacing " + std::to_string(spacing) + " in " +
                      std::to_string(free_dims) + " dimensions has " +
                      std::to_string(static_cast<long long>(count)) +
                      " points, cap is " + std::to_string(cap));
  }
  size_ = static_cast<std::size_t>(count);
}

Vector GridSpec::point(std::size_t index) const {
  if (index >= size_) throw InvalidArgument("grid index out of range");
  Vector p(dim(), 1.0);
  for (std::size_t i = free_dims_; i-- > 0;) {
    p[i] = static_cast<double>(index % (steps_ + 1)) * spacing_;
    index /= steps_ + 1;
  }
  return p;
}

bool GridSpec::is_aligned(std::span<const double> p) const {
  if (p.size() != dim()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (is_pinned(i)) {
      if (p[i] != 1.0) return false;
      continue;
    }
    const double scaled = p[i] / spacing_;
    if (!(p[i] >= 0.0 && p[i] <= 1.0) || scaled != std::floor(scaled)) return false;
  }
  return true;
}

}  // namespace omnipred
