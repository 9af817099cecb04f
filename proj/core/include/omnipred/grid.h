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

#ifndef OMNIPRED_GRID_H_
#define OMNIPRED_GRID_H_

#include <cstddef>
#include <span>

#include "omnipred/domain.h"

namespace omnipred {

inline constexpr std::size_t kDefaultGridCap = 20'000;

// 2^-ceil(log2 sqrt(T)) clamped to [1/64, 1/8].
double default_grid_spacing(std::size_t horizon);

// Discretized prediction space {0, h, ..., 1}^free_dims, optionally followed
// by one coordinate pinned to 1 (the affine augmentation). h = 2^-k, k >= 1.
// Points are enumerated lexicographically with the first coordinate most
// significant, so point 0 is the origin.
class GridSpec {
 public:
  GridSpec(std::size_t free_dims, double spacing, bool pinned_last = false,
           std::size_t cap = kDefaultGridCap);

  double spacing() const { return spacing_; }
  std::size_t free_dims() const { return free_dims_; }
  std::size_t dim() const { return free_dims_ + (pinned_last_ ? 1 : 0); }
  bool pinned_last() const { return pinned_last_; }
  bool is_pinned(std::size_t coord) const { return pinned_last_ && coord == free_dims_; }
  std::size_t size() const { return size_; }
  std::size_t steps() const { return steps_; }

  Vector point(std::size_t index) const;
  bool is_aligned(std::span<const double> p) const;

 private:
  std::size_t free_dims_;
  double spacing_;
  bool pinned_last_;
  std::size_t steps_;  // 1/h
  std::size_t size_;
};

}  // namespace omnipred

#endif  // OMNIPRED_GRID_H_
