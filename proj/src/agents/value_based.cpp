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

#include "sparserl/agents/value_based.hpp"

#include <algorithm>
#include <cmath>

#include "sparserl/common/errors.hpp"

namespace sparserl::agents {

std::vector<double> td_targets(const nn::NetworkParams& target_params,
                               const pruning::Mask& target_mask, const replay::Batch& batch,
                               double gamma) {
  if (batch.size == 0) throw ArgumentError("td_targets: empty batch");
  const auto cache = nn::forward_batch(target_params, target_mask, batch.next_states, batch.size);
  const std::size_t width = target_params.output_width();
  const auto q = cache.output();
  std::vector<double> y(batch.size);
  for (std::size_t b = 0; b < batch.size; ++b) {
    if (batch.dones[b]) {
      y[b] = batch.rewards[b];
      continue;
    }
    const auto row = q.subspan(b * width, width);
    y[b] = batch.rewards[b] + gamma * *std::max_element(row.begin(), row.end());
  }
  return y;
}

double train_member(Member& member, const replay::Batch& batch, std::span<const double> targets,
                    std::size_t member_id) {
  nn::LossAndGradient lg;
  try {
    lg = nn::td_backward(member.params, member.mask, batch.states, batch.action_indices, targets);
  } catch (const NumericError& e) {
    throw NumericError("member " + std::to_string(member_id) + ": " + e.what(), e.layer());
  }
  if (!std::isfinite(lg.loss)) {
    throw NumericError("member " + std::to_string(member_id) + ": non-finite TD loss");
  }
  nn::adam_step(member.params, lg.gradient, member.optimizer);
  member.cumulated_loss += lg.loss;
  return lg.loss;
}

std::size_t greedy_action(const nn::NetworkParams& params, const pruning::Mask& mask,
                          std::span<const double> state) {
  const auto q = nn::forward(params, mask, state);
  return static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
}

std::size_t act_epsilon_greedy(const Member& member, std::span<const double> state,
                               double epsilon, RngStream& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ArgumentError("epsilon outside [0, 1]");
  if (rng.uniform() < epsilon) {
    return static_cast<std::size_t>(rng.uniform_index(member.params.output_width()));
  }
  return greedy_action(member.params, member.mask, state);
}

double EpsilonSchedule::at(std::int64_t t) const {
  if (t <= warmup) return start;
  const double progress =
      std::min(1.0, static_cast<double>(t - warmup) / static_cast<double>(std::max<std::int64_t>(decay_steps, 1)));
  return start + (end - start) * progress;
}

void distillqn_update(Member& member, const pruning::PolyPruneConfig& schedule, std::int64_t t) {
  prune_member(member, pruning::poly_schedule(t, schedule));
}

}  // namespace sparserl::agents
