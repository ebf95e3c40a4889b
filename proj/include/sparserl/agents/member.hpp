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

#include <cstdint>
#include <vector>

#include "sparserl/nncore/adam.hpp"
#include "sparserl/nncore/network.hpp"
#include "sparserl/pruning/mask.hpp"

namespace sparserl::agents {

// One online network of a population together with everything selection
// needs to know about it.
struct Member {
  nn::NetworkParams params;
  pruning::Mask mask;
  nn::AdamState optimizer;
  double cumulated_loss = 0.0;
  double sparsity = 0.0;
  std::int64_t lineage_id = 0;

  static Member dense(nn::NetworkParams params, nn::AdamConfig adam, std::int64_t lineage_id);
  bool operator==(const Member&) const = default;
};

// Re-prunes to `target` by weight magnitude without ever reviving a pruned
// weight. Newly masked weights and their Adam moments are zeroed; the step
// count and hyperparameters stay.
void prune_member(Member& member, double target);

// Throws std::logic_error when sparsity, mask and zeroed weights disagree.
void check_member(const Member& member);

std::vector<double> losses_of(const std::vector<Member>& members);

// Value-based population: K online members sharing one hard-copied target.
struct Population {
  std::vector<Member> members;
  nn::NetworkParams target_params;
  pruning::Mask target_mask;
  std::size_t champion = 0;
  std::int64_t next_lineage_id = 0;

  std::size_t size() const { return members.size(); }
  void copy_target_from(std::size_t index);
  bool operator==(const Population&) const = default;
};

}  // namespace sparserl::agents
