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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sparserl/agents/member.hpp"
#include "sparserl/common/rng.hpp"
#include "sparserl/envs/environment.hpp"
#include "sparserl/pruning/pruning.hpp"
#include "sparserl/replay/replay_buffer.hpp"

namespace sparserl::agents {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;

// Tanh-squashed diagonal Gaussian. The network emits [mean_0..mean_{d-1},
// log_std_0..log_std_{d-1}]; log_std is clamped to [-20, 2] and the squashed
// sample is affinely mapped onto the action bounds. The actor is never pruned.
struct GaussianPolicy {
  nn::NetworkParams network;
  pruning::Mask mask;
  nn::AdamState optimizer;
  envs::ContinuousActions bounds;

  static GaussianPolicy create(std::size_t observation_width, std::span<const std::size_t> hidden,
                               envs::ContinuousActions bounds, nn::AdamConfig adam,
                               RngStream& rng);
  std::size_t action_dim() const { return bounds.dimension; }
  double scale() const { return 0.5 * (bounds.high - bounds.low); }
  double center() const { return 0.5 * (bounds.high + bounds.low); }
  bool operator==(const GaussianPolicy&) const = default;
};

struct PolicySample {
  std::vector<double> actions;    // batch x d, in environment units
  std::vector<double> log_probs;  // batch
};

// Reparameterized sample a = center + scale * tanh(mean + std * noise) for a
// given standard-normal `noise` (batch x d).
PolicySample sample_with_noise(const GaussianPolicy& policy, std::span<const double> states,
                               std::size_t batch, std::span<const double> noise);
PolicySample sample_actions(const GaussianPolicy& policy, std::span<const double> states,
                            std::size_t batch, RngStream& rng);
std::vector<double> mean_action(const GaussianPolicy& policy, std::span<const double> state);

// Density of `action` (environment units) under the squashed Gaussian with
// the given pre-squash mean and log_std, one dimension. Includes the tanh and
// affine change of variables.
double squashed_log_prob(double mean, double log_std, double action,
                         const envs::ContinuousActions& bounds);

// Soft-target critics for one twin index i: K online members, each with its
// own Polyak-averaged target, evaluated under the member's mask.
struct CriticSet {
  std::vector<Member> members;
  std::vector<nn::NetworkParams> targets;
  std::size_t champion = 0;
  bool operator==(const CriticSet&) const = default;
};

struct TwinCriticPopulation {
  std::array<CriticSet, 2> critics;
  double tau = 0.005;
  double alpha = 0.2;
  std::int64_t pruning_period = 250;
  std::int64_t next_lineage_id = 0;

  std::size_t population_size() const { return critics[0].members.size(); }
  bool operator==(const TwinCriticPopulation&) const = default;
};

// Row-wise concatenation [state, action] feeding a critic.
std::vector<double> critic_inputs(std::span<const double> states, std::span<const double> actions,
                                  std::size_t batch);

double critic_value(const nn::NetworkParams& params, const pruning::Mask& mask,
                    std::span<const double> state, std::span<const double> action);

// y = r + gamma * (1 - done) * (min_i Qbar_i^{psi_i}(s', a') - alpha log pi(a'|s')),
// a' ~ pi(.|s'). The overload with `next` uses a fixed next-action sample.
std::vector<double> sac_critic_targets(const TwinCriticPopulation& twin,
                                       const GaussianPolicy& policy, const replay::Batch& batch,
                                       double gamma, RngStream& rng);
std::vector<double> sac_critic_targets(const TwinCriticPopulation& twin,
                                       const replay::Batch& batch, double gamma,
                                       const PolicySample& next);

// target <- tau * online + (1 - tau) * target
void soft_update(nn::NetworkParams& target, const nn::NetworkParams& online, double tau);

// (1 - tau) * L + tau * batch_loss
double ema_loss_update(double cumulated, double batch_loss, double tau);

// One critic member step: masked Adam step on the summed squared error,
// soft target update, EMA loss update. Returns the batch loss.
double train_critic(Member& member, nn::NetworkParams& target, std::span<const double> inputs,
                    std::span<const double> targets, double tau, std::size_t member_id = 0);

// All 2K critic members; serial reference and OpenMP fan-out.
std::vector<double> train_critics_serial(TwinCriticPopulation& twin, const replay::Batch& batch,
                                         std::span<const double> targets);
std::vector<double> train_critics_parallel(TwinCriticPopulation& twin,
                                           const replay::Batch& batch,
                                           std::span<const double> targets, int threads);

struct ActorObjective {
  double value = 0.0;        // mean over the batch
  nn::Gradient gradient;     // d value / d actor parameters
};

// Objective mean_b[min(Q1(s, a), Q2(s, a)) - alpha log pi(a|s)] with a
// reparameterized from fixed `noise`, and its exact gradient.
ActorObjective actor_objective(const GaussianPolicy& policy,
                               std::array<const Member*, 2> critics,
                               std::span<const double> states, std::size_t batch,
                               std::span<const double> noise, double alpha);
double actor_objective_value(const GaussianPolicy& policy, std::array<const Member*, 2> critics,
                             std::span<const double> states, std::size_t batch,
                             std::span<const double> noise, double alpha);

// One gradient-ascent step of the actor against the behavior critics
// (psi_1^b, psi_2^b). Critics are untouched. Returns the objective.
double sac_actor_update(GaussianPolicy& policy, const TwinCriticPopulation& twin,
                        const replay::Batch& batch, std::array<std::size_t, 2> behavior,
                        RngStream& rng);

// Exploitation and exploration per critic index, then L_i^k <- 0. Duplicated
// members restart their soft target from the pruned copy.
void eaudesac_prune_event(TwinCriticPopulation& twin, std::int64_t t, std::int64_t t_next,
                          const pruning::EauDeConfig& cfg, RngStream& rng);

}  // namespace sparserl::agents
