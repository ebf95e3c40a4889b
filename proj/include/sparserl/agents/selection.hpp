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
#include <functional>
#include <span>
#include <vector>

#include "sparserl/agents/member.hpp"
#include "sparserl/common/rng.hpp"
#include "sparserl/pruning/pruning.hpp"

namespace sparserl::agents {

inline constexpr double kLossFloor = 1e-12;

// p_k proportional to 1 / max(L_k, 1e-12); uniform when every loss is below
// the floor.
std::vector<double> behavior_distribution(std::span<const double> losses);

// Inverse-CDF draw from a probability vector; consumes one uniform.
std::size_t sample_index(std::span<const double> probabilities, RngStream& rng);

// argmin, ties to the lowest index.
std::size_t select_target(std::span<const double> losses);

// Lowest-loss contender, ties to the lowest index.
std::size_t tournament_winner(std::span<const double> losses,
                              std::span<const std::size_t> contenders);

// Slot 0 is the champion; every other slot is the winner of an independent
// tournament over `tournament_size` distinct members drawn uniformly.
// Throws ConfigError when tournament_size > K.
std::vector<std::size_t> exploitation(std::span<const double> losses, std::size_t champion,
                                      std::size_t tournament_size, RngStream& rng);

// Same rule with an injected contender source (one call per tournament).
std::vector<std::size_t> exploitation(
    std::span<const double> losses, std::size_t champion,
    const std::function<std::vector<std::size_t>()>& draw_contenders);

struct ExplorationResult {
  std::vector<Member> members;
  std::vector<std::size_t> sources;  // source index of each slot
  std::vector<bool> duplicated;      // false for the first occurrence of a source
};

// Builds the next population from a selection. First occurrences move in
// untouched; later occurrences are copies pruned to a sparsity sampled from
// the source's current level, with a reset optimizer and a fresh lineage id.
// Past t_final sparsity is frozen. All cumulated losses end at 0.
ExplorationResult exploration(const std::vector<Member>& members,
                              std::span<const std::size_t> selection, std::int64_t t,
                              std::int64_t t_next, const pruning::EauDeConfig& cfg,
                              RngStream& rng, std::int64_t& next_lineage_id);

}  // namespace sparserl::agents
