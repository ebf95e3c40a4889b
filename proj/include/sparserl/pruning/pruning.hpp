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
#include <cstdint>

#include "sparserl/common/rng.hpp"
#include "sparserl/nncore/network.hpp"
#include "sparserl/pruning/mask.hpp"

namespace sparserl::pruning {

// Fraction of zero entries over all maskable positions.
double sparsity_of(const Mask& mask);

// Number of weights a layer of `count` entries loses at `target` sparsity
// (round half up).
std::size_t pruned_count(std::size_t count, double target);

// Per-layer magnitude pruning: in each weight matrix, the round(target * n)
// smallest |w| are zeroed, ties going to the lowest flat index.
Mask magnitude_mask(const nn::NetworkParams& params, double target);

// Re-pruning variant used along a lineage: positions already zero in
// `previous` rank below every live weight and each layer keeps at least its
// previous number of zeros, so sparsity never decreases.
Mask magnitude_mask(const nn::NetworkParams& params, double target, const Mask& previous);

// Element-wise product on the weights; biases untouched.
nn::NetworkParams apply_mask(nn::NetworkParams params, const Mask& mask);
void apply_mask_in_place(nn::NetworkParams& params, const Mask& mask);

// Polynomial dense-to-sparse schedule parameters.
struct PolyPruneConfig {
  double final_sparsity = 0.95;
  double exponent = 3.0;
  std::int64_t t_start = 0;
  std::int64_t t_end = 1;
  std::int64_t t_final = 1;
  std::int64_t pruning_period = 1;

  // Throws ConfigError.
  void validate() const;
};

// s_F * (1 - (1 - clip((t - t_start) / (t_end - t_start), 0, 1))^n)
double poly_schedule(std::int64_t t, const PolyPruneConfig& cfg);

struct EauDeConfig {
  double u_max = 3.0;
  double s_max = 0.01;
  std::size_t population_size = 5;
  std::size_t tournament_size = 3;
  std::int64_t t_final = 1;

  void validate() const;
};

// Sparsity increment for a given noise draw `u`: the step along the line
// from (t, s_t) to (t_final, 1) scaled by u, capped at s_max of what remains.
// Result is always in [s_t, 1).
double sparsity_step(double s_t, std::int64_t t, std::int64_t t_next, const EauDeConfig& cfg,
                     double u);

// Draws u ~ Uniform(0, u_max) from `rng` and applies sparsity_step. Throws
// ScheduleExhausted when t >= t_final.
double sample_sparsity(double s_t, std::int64_t t, std::int64_t t_next, const EauDeConfig& cfg,
                       RngStream& rng);

}  // namespace sparserl::pruning
