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
#include <span>
#include <vector>

#include "sparserl/agents/member.hpp"
#include "sparserl/common/rng.hpp"
#include "sparserl/pruning/pruning.hpp"
#include "sparserl/replay/replay_buffer.hpp"

namespace sparserl::agents {

// y_j = r_j + gamma * (1 - done_j) * max_a' Q_target(s'_j, a'). One vector,
// shared by every member trained on this batch.
std::vector<double> td_targets(const nn::NetworkParams& target_params,
                               const pruning::Mask& target_mask, const replay::Batch& batch,
                               double gamma);

// One masked Adam step on the summed squared TD error; adds the batch loss to
// the member's cumulated loss and returns it. The mask is never touched.
// Throws NumericError (naming `member_id`) on a non-finite loss.
double train_member(Member& member, const replay::Batch& batch, std::span<const double> targets,
                    std::size_t member_id = 0);

// argmax_a Q(state, a), ties to the lowest index.
std::size_t greedy_action(const nn::NetworkParams& params, const pruning::Mask& mask,
                          std::span<const double> state);

// Uniform action with probability epsilon, greedy otherwise. Always consumes
// one uniform, plus one index draw when exploring.
std::size_t act_epsilon_greedy(const Member& member, std::span<const double> state,
                               double epsilon, RngStream& rng);

struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.01;
  std::int64_t decay_steps = 1;
  std::int64_t warmup = 0;

  // Held at `start` through warmup, then linear to `end` over decay_steps.
  double at(std::int64_t t) const;
};

// Prunes the online network to poly_schedule(t) after a target update. The
// optimizer is kept (only the moments at newly pruned positions are zeroed).
void distillqn_update(Member& member, const pruning::PolyPruneConfig& schedule, std::int64_t t);

}  // namespace sparserl::agents
