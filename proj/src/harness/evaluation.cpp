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

#include "sparserl/harness/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "sparserl/agents/value_based.hpp"
#include "sparserl/common/errors.hpp"
#include "sparserl/envs/value_iteration.hpp"

namespace sparserl::harness {

double EvaluationResult::standard_error() const {
  const std::size_t n = returns.size();
  if (n < 2) return 0.0;
  double var = 0.0;
  for (double r : returns) var += (r - mean) * (r - mean);
  var /= static_cast<double>(n - 1);
  return std::sqrt(var / static_cast<double>(n));
}

EvaluationResult evaluate_policy(const envs::Environment& env, const PolicyFn& policy,
                                 std::size_t episodes, RngStream& rng) {
  if (episodes == 0) throw ArgumentError("evaluation needs at least one episode");
  EvaluationResult result;
  result.returns.reserve(episodes);
  const std::size_t horizon = env.spec().horizon;
  for (std::size_t e = 0; e < episodes; ++e) {
    auto state = env.reset(rng);
    double total = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      auto step = env.step(state, policy(state), rng);
      total += step.reward;
      if (step.done) break;
      state = std::move(step.next_state);
    }
    result.returns.push_back(total);
  }
  double sum = 0.0;
  for (double r : result.returns) sum += r;
  result.mean = sum / static_cast<double>(episodes);
  return result;
}

EvaluationResult evaluate_greedy(const nn::NetworkParams& params, const pruning::Mask& mask,
                                 const envs::Environment& env, std::size_t episodes,
                                 RngStream& rng) {
  return evaluate_policy(
      env,
      [&](std::span<const double> s) -> envs::Action {
        return agents::greedy_action(params, mask, s);
      },
      episodes, rng);
}

EvaluationResult evaluate_mean_action(const agents::GaussianPolicy& policy,
                                      const envs::Environment& env, std::size_t episodes,
                                      RngStream& rng) {
  return evaluate_policy(
      env, [&](std::span<const double> s) -> envs::Action { return agents::mean_action(policy, s); },
      episodes, rng);
}

EvaluationResult evaluate_random(const envs::Environment& env, std::size_t episodes,
                                 RngStream& rng) {
  RngStream action_rng = rng.derive("actions");
  const auto& spec = env.spec();
  return evaluate_policy(
      env,
      [&](std::span<const double>) -> envs::Action {
        if (spec.discrete()) return static_cast<std::size_t>(action_rng.uniform_index(spec.action_count()));
        const auto box = spec.continuous();
        std::vector<double> a(box.dimension);
        for (double& x : a) x = action_rng.uniform(box.low, box.high);
        return a;
      },
      episodes, rng);
}

double reference_score(const envs::Environment& env) {
  if (const auto* tab = dynamic_cast<const envs::TabularEnvironment*>(&env)) {
    const auto q = envs::value_iteration(*tab, env.spec().discount, 1e-10);
    RngStream rng(0, "reference");
    return evaluate_policy(
               env,
               [&](std::span<const double> s) -> envs::Action { return q.greedy(tab->state_index(s)); },
               1, rng)
        .mean;
  }
  switch (env.spec().id) {
    case envs::EnvId::cartpole:
      return static_cast<double>(env.spec().horizon);
    case envs::EnvId::pendulum:
      return 0.0;
    default:
      throw UnsupportedError("no reference score for " + envs::to_string(env.spec().id));
  }
}

envs::NormalizationBaselines compute_baselines(const envs::Environment& env,
                                               std::size_t random_episodes, RngStream& rng) {
  envs::NormalizationBaselines b;
  b.random_baseline = evaluate_random(env, random_episodes, rng).mean;
  b.reference_score = reference_score(env);
  return b;
}

std::size_t greedy_disagreements(const nn::NetworkParams& params, const pruning::Mask& mask,
                                 const envs::TabularEnvironment& env) {
  const auto q = envs::value_iteration(env, env.spec().discount, 1e-10);
  std::size_t wrong = 0;
  for (std::size_t s = 0; s < env.num_states(); ++s) {
    if (env.terminal(s)) continue;
    const auto a = agents::greedy_action(params, mask, env.observation(s));
    const auto best = q.optimal_actions(s, 1e-9);
    if (std::find(best.begin(), best.end(), a) == best.end()) ++wrong;
  }
  return wrong;
}

}  // namespace sparserl::harness
