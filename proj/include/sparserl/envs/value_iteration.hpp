// Copyright 2026 The sparserl Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

#include "sparserl/envs/environment.hpp"

namespace sparserl::envs {

struct QTable {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::vector<double> values;  // row-major (state x action)
  std::size_t sweeps = 0;

  double at(std::size_t s, std::size_t a) const { return values[s * num_actions + a]; }
  double value(std::size_t s) const;
  std::size_t greedy(std::size_t s) const;  // ties -> lowest index
  // Actions within `tolerance` of the maximum.
  std::vector<std::size_t> optimal_actions(std::size_t s, double tolerance = 1e-9) const;
};

// Synchronous value iteration on a tabular environment until the max-norm
// Bellman residual drops below `tolerance`. Terminal states have Q = 0.
// Throws UnsupportedError for non-tabular environments.
QTable value_iteration(const Environment& env, double discount, double tolerance);

}  // namespace sparserl::envs
