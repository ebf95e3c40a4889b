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
#include <functional>
#include <span>
#include <vector>

#include "sparserl/agents/sac.hpp"
#include "sparserl/common/rng.hpp"
#include "sparserl/envs/environment.hpp"

namespace sparserl::harness {

using PolicyFn = std::function<envs::Action(std::span<const double>)>;

struct EvaluationResult {
  double mean = 0.0;
  std::vector<double> returns;  // undiscounted, one per episode

  double standard_error() const;
};

// Runs `episodes` full episodes (termination or horizon) and averages the
// undiscounted returns. Throws ArgumentError when episodes == 0.
EvaluationResult evaluate_policy(const envs::Environment& env, const PolicyFn& policy,
                                 std::size_t episodes, RngStream& rng);

EvaluationResult evaluate_greedy(const nn::NetworkParams& params, const pruning::Mask& mask,
                                 const envs::Environment& env, std::size_t episodes,
                                 RngStream& rng);
EvaluationResult evaluate_mean_action(const agents::GaussianPolicy& policy,
                                      const envs::Environment& env, std::size_t episodes,
                                      RngStream& rng);
// Uniform actions: discrete index or a point in the action box.
EvaluationResult evaluate_random(const envs::Environment& env, std::size_t episodes,
                                 RngStream& rng);

// Tabular: return of the value-iteration greedy policy. Cart-pole: the
// horizon. Pendulum: 0, the upper bound of the reward.
double reference_score(const envs::Environment& env);

envs::NormalizationBaselines compute_baselines(const envs::Environment& env,
                                               std::size_t random_episodes, RngStream& rng);

// Greedy action of `params` agrees with a value-iteration optimal action on
// every non-terminal state. Returns the number of disagreeing states.
std::size_t greedy_disagreements(const nn::NetworkParams& params, const pruning::Mask& mask,
                                 const envs::TabularEnvironment& env);

}  // namespace sparserl::harness
