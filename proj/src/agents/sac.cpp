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

#include "sparserl/agents/sac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sparserl/agents/population_kernels.hpp"
#include "sparserl/agents/selection.hpp"
#include "sparserl/common/errors.hpp"

namespace sparserl::agents {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2 pi)

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// log(1 - tanh(u)^2) without cancellation.
double log_one_minus_tanh_sq(double u) {
  return 2.0 * (std::numbers::ln2 - u - softplus(-2.0 * u));
}

struct SquashedSample {
  std::vector<double> actions;
  std::vector<double> log_probs;
  std::vector<double> squashed;  // tanh(u)
  std::vector<double> stds;
  std::vector<std::uint8_t> log_std_active;  // 1 when the clamp is not binding
};

SquashedSample squash(const GaussianPolicy& policy, std::span<const double> outputs,
                      std::size_t batch, std::span<const double> noise) {
  const std::size_t d = policy.action_dim();
  if (noise.size() != batch * d) throw ArgumentError("policy noise has wrong size");
  const double scale = policy.scale();
  const double center = policy.center();
  SquashedSample s;
  s.actions.resize(batch * d);
  s.log_probs.assign(batch, 0.0);
  s.squashed.resize(batch * d);
  s.stds.resize(batch * d);
  s.log_std_active.resize(batch * d);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t j = 0; j < d; ++j) {
      const double mean = outputs[b * 2 * d + j];
      const double raw = outputs[b * 2 * d + d + j];
      const double log_std = std::clamp(raw, kLogStdMin, kLogStdMax);
      const double stdev = std::exp(log_std);
      const double eps = noise[b * d + j];
      const double u = mean + stdev * eps;
      const double squashed = std::tanh(u);
      const std::size_t k = b * d + j;
      s.actions[k] = center + scale * squashed;
      s.squashed[k] = squashed;
      s.stds[k] = stdev;
      s.log_std_active[k] = raw >= kLogStdMin && raw <= kLogStdMax;
      s.log_probs[b] += -0.5 * eps * eps - log_std - kHalfLog2Pi - std::log(scale) -
                        log_one_minus_tanh_sq(u);
    }
  }
  return s;
}

}  // namespace

GaussianPolicy GaussianPolicy::create(std::size_t observation_width,
                                      std::span<const std::size_t> hidden,
                                      envs::ContinuousActions bounds, nn::AdamConfig adam,
                                      RngStream& rng) {
  if (!(bounds.high > bounds.low) || bounds.dimension == 0) {
    throw ConfigError("policy needs a non-empty continuous action box");
  }
  GaussianPolicy p;
  p.network = nn::init_network(nn::mlp_specs(observation_width, hidden, 2 * bounds.dimension), rng);
  p.mask = pruning::Mask::ones_like(p.network);
  p.optimizer = nn::AdamState::fresh(p.network, adam);
  p.bounds = bounds;
  return p;
}

PolicySample sample_with_noise(const GaussianPolicy& policy, std::span<const double> states,
                               std::size_t batch, std::span<const double> noise) {
  const auto cache = nn::forward_batch(policy.network, policy.mask, states, batch);
  auto s = squash(policy, cache.output(), batch, noise);
  return {std::move(s.actions), std::move(s.log_probs)};
}

PolicySample sample_actions(const GaussianPolicy& policy, std::span<const double> states,
                            std::size_t batch, RngStream& rng) {
  std::vector<double> noise(batch * policy.action_dim());
  for (double& e : noise) e = rng.normal();
  return sample_with_noise(policy, states, batch, noise);
}

std::vector<double> mean_action(const GaussianPolicy& policy, std::span<const double> state) {
  const auto out = nn::forward(policy.network, policy.mask, state);
  std::vector<double> a(policy.action_dim());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = policy.center() + policy.scale() * std::tanh(out[j]);
  return a;
}

double squashed_log_prob(double mean, double log_std, double action,
                         const envs::ContinuousActions& bounds) {
  const double scale = 0.5 * (bounds.high - bounds.low);
  const double center = 0.5 * (bounds.high + bounds.low);
  const double squashed = (action - center) / scale;
  if (!(squashed > -1.0 && squashed < 1.0)) return -std::numeric_limits<double>::infinity();
  const double u = std::atanh(squashed);
  const double ls = std::clamp(log_std, kLogStdMin, kLogStdMax);
  const double z = (u - mean) / std::exp(ls);
  return -0.5 * z * z - ls - kHalfLog2Pi - std::log(scale) - log_one_minus_tanh_sq(u);
}

std::vector<double> critic_inputs(std::span<const double> states, std::span<const double> actions,
                                  std::size_t batch) {
  if (batch == 0 || states.size() % batch != 0 || actions.size() % batch != 0) {
    throw ArgumentError("critic_inputs: ragged batch");
  }
  const std::size_t sw = states.size() / batch;
  const std::size_t aw = actions.size() / batch;
  std::vector<double> out;
  out.reserve(batch * (sw + aw));
  for (std::size_t b = 0; b < batch; ++b) {
    out.insert(out.end(), states.begin() + static_cast<std::ptrdiff_t>(b * sw),
               states.begin() + static_cast<std::ptrdiff_t>((b + 1) * sw));
    out.insert(out.end(), actions.begin() + static_cast<std::ptrdiff_t>(b * aw),
               actions.begin() + static_cast<std::ptrdiff_t>((b + 1) * aw));
  }
  return out;
}

double critic_value(const nn::NetworkParams& params, const pruning::Mask& mask,
                    std::span<const double> state, std::span<const double> action) {
  const auto in = critic_inputs(state, action, 1);
  return nn::forward(params, mask, in)[0];
}

std::vector<double> sac_critic_targets(const TwinCriticPopulation& twin,
                                       const replay::Batch& batch, double gamma,
                                       const PolicySample& next) {
  if (batch.size == 0) throw ArgumentError("sac_critic_targets: empty batch");
  const auto inputs = critic_inputs(batch.next_states, next.actions, batch.size);
  std::array<std::vector<double>, 2> q;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& set = twin.critics[i];
    const auto cache = nn::forward_batch(set.targets.at(set.champion),
                                         set.members.at(set.champion).mask, inputs, batch.size);
    q[i].assign(cache.output().begin(), cache.output().end());
  }
  std::vector<double> y(batch.size);
  for (std::size_t b = 0; b < batch.size; ++b) {
    if (batch.dones[b]) {
      y[b] = batch.rewards[b];
      continue;
    }
    const double soft_value = std::min(q[0][b], q[1][b]) - twin.alpha * next.log_probs[b];
    y[b] = batch.rewards[b] + gamma * soft_value;
  }
  return y;
}

std::vector<double> sac_critic_targets(const TwinCriticPopulation& twin,
                                       const GaussianPolicy& policy, const replay::Batch& batch,
                                       double gamma, RngStream& rng) {
  const auto next = sample_actions(policy, batch.next_states, batch.size, rng);
  return sac_critic_targets(twin, batch, gamma, next);
}

void soft_update(nn::NetworkParams& target, const nn::NetworkParams& online, double tau) {
  if (target.layers != online.layers) throw ConfigError("soft_update: shapes disagree");
  auto mix = [tau](std::vector<double>& t, const std::vector<double>& o) {
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = tau * o[k] + (1.0 - tau) * t[k];
  };
  for (std::size_t l = 0; l < target.layers.size(); ++l) {
    mix(target.weights[l], online.weights[l]);
    mix(target.biases[l], online.biases[l]);
  }
}

double ema_loss_update(double cumulated, double batch_loss, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw ArgumentError("ema rate must lie in (0, 1]");
  return (1.0 - tau) * cumulated + tau * batch_loss;
}

double train_critic(Member& member, nn::NetworkParams& target, std::span<const double> inputs,
                    std::span<const double> targets, double tau, std::size_t member_id) {
  const std::vector<std::size_t> head(targets.size(), 0);
  nn::LossAndGradient lg;
  try {
    lg = nn::td_backward(member.params, member.mask, inputs, head, targets);
  } catch (const NumericError& e) {
    throw NumericError("critic " + std::to_string(member_id) + ": " + e.what(), e.layer());
  }
  if (!std::isfinite(lg.loss)) {
    throw NumericError("critic " + std::to_string(member_id) + ": non-finite loss");
  }
  nn::adam_step(member.params, lg.gradient, member.optimizer);
  soft_update(target, member.params, tau);
  member.cumulated_loss = ema_loss_update(member.cumulated_loss, lg.loss, tau);
  return lg.loss;
}

namespace {

std::vector<double> train_critics(TwinCriticPopulation& twin, const replay::Batch& batch,
                                  std::span<const double> targets, int threads, bool parallel) {
  const auto inputs = critic_inputs(batch.states, batch.action_vectors, batch.size);
  const std::size_t k = twin.population_size();
  std::vector<double> losses(2 * k);
  auto body = [&](std::size_t job) {
    auto& set = twin.critics[job / k];
    const std::size_t m = job % k;
    losses[job] = train_critic(set.members[m], set.targets[m], inputs, targets, twin.tau, job);
  };
  if (parallel) {
    parallel_for(2 * k, threads, body);
  } else {
    for (std::size_t job = 0; job < 2 * k; ++job) body(job);
  }
  return losses;
}

}  // namespace

std::vector<double> train_critics_serial(TwinCriticPopulation& twin, const replay::Batch& batch,
                                         std::span<const double> targets) {
  return train_critics(twin, batch, targets, 1, false);
}

std::vector<double> train_critics_parallel(TwinCriticPopulation& twin,
                                           const replay::Batch& batch,
                                           std::span<const double> targets, int threads) {
  return train_critics(twin, batch, targets, threads, true);
}

namespace {

struct ActorPass {
  nn::ForwardCache cache;
  SquashedSample sample;
  std::array<nn::ForwardCache, 2> critic_caches;
  std::vector<double> critic_in;
  double value = 0.0;
  std::vector<std::uint8_t> use_second;  // per sample: which critic attains the min
};

ActorPass actor_pass(const GaussianPolicy& policy, std::array<const Member*, 2> critics,
                     std::span<const double> states, std::size_t batch,
                     std::span<const double> noise, double alpha) {
  ActorPass p;
  p.cache = nn::forward_batch(policy.network, policy.mask, states, batch);
  p.sample = squash(policy, p.cache.output(), batch, noise);
  p.critic_in = critic_inputs(states, p.sample.actions, batch);
  for (std::size_t i = 0; i < 2; ++i) {
    p.critic_caches[i] = nn::forward_batch(critics[i]->params, critics[i]->mask, p.critic_in, batch);
  }
  p.use_second.resize(batch);
  const auto q1 = p.critic_caches[0].output();
  const auto q2 = p.critic_caches[1].output();
  double total = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    p.use_second[b] = q2[b] < q1[b];
    const double q = p.use_second[b] ? q2[b] : q1[b];
    total += q - alpha * p.sample.log_probs[b];
  }
  p.value = total / static_cast<double>(batch);
  return p;
}

}  // namespace

double actor_objective_value(const GaussianPolicy& policy, std::array<const Member*, 2> critics,
                             std::span<const double> states, std::size_t batch,
                             std::span<const double> noise, double alpha) {
  return actor_pass(policy, critics, states, batch, noise, alpha).value;
}

ActorObjective actor_objective(const GaussianPolicy& policy, std::array<const Member*, 2> critics,
                               std::span<const double> states, std::size_t batch,
                               std::span<const double> noise, double alpha) {
  const auto p = actor_pass(policy, critics, states, batch, noise, alpha);
  const std::size_t d = policy.action_dim();
  const double inv_batch = 1.0 / static_cast<double>(batch);

  // dJ/da through whichever critic attains the minimum for each sample.
  std::vector<double> d_action(batch * d, 0.0);
  const std::size_t in_width = p.critic_in.size() / batch;
  const std::size_t state_width = in_width - d;
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<double> out_grad(batch, 0.0);
    bool any = false;
    for (std::size_t b = 0; b < batch; ++b) {
      if ((p.use_second[b] != 0) == (i == 1)) {
        out_grad[b] = inv_batch;
        any = true;
      }
    }
    if (!any) continue;
    std::vector<double> input_grad;
    nn::backprop(critics[i]->params, critics[i]->mask, p.critic_caches[i], out_grad, &input_grad);
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t j = 0; j < d; ++j) d_action[b * d + j] += input_grad[b * in_width + state_width + j];
    }
  }

  const double scale = policy.scale();
  std::vector<double> out_grad(batch * 2 * d, 0.0);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t k = b * d + j;
      const double t = p.sample.squashed[k];
      const double d_u = d_action[k] * scale * (1.0 - t * t) - alpha * inv_batch * 2.0 * t;
      out_grad[b * 2 * d + j] = d_u;
      if (p.sample.log_std_active[k]) {
        out_grad[b * 2 * d + d + j] = d_u * p.sample.stds[k] * noise[k] + alpha * inv_batch;
      }
    }
  }
  ActorObjective result;
  result.value = p.value;
  result.gradient = nn::backprop(policy.network, policy.mask, p.cache, out_grad);
  return result;
}

double sac_actor_update(GaussianPolicy& policy, const TwinCriticPopulation& twin,
                        const replay::Batch& batch, std::array<std::size_t, 2> behavior,
                        RngStream& rng) {
  std::vector<double> noise(batch.size * policy.action_dim());
  for (double& e : noise) e = rng.normal();
  const std::array<const Member*, 2> critics{&twin.critics[0].members.at(behavior[0]),
                                             &twin.critics[1].members.at(behavior[1])};
  auto objective = actor_objective(policy, critics, batch.states, batch.size, noise, twin.alpha);
  // Ascent: hand Adam the negated gradient.
  for (auto& w : objective.gradient.weights) {
    for (double& g : w) g = -g;
  }
  for (auto& bias : objective.gradient.biases) {
    for (double& g : bias) g = -g;
  }
  nn::adam_step(policy.network, objective.gradient, policy.optimizer);
  return objective.value;
}

void eaudesac_prune_event(TwinCriticPopulation& twin, std::int64_t t, std::int64_t t_next,
                          const pruning::EauDeConfig& cfg, RngStream& rng) {
  for (auto& set : twin.critics) {
    const auto losses = losses_of(set.members);
    const std::size_t champion = select_target(losses);
    const auto selection = exploitation(losses, champion, cfg.tournament_size, rng);
    auto result = exploration(set.members, selection, t, t_next, cfg, rng, twin.next_lineage_id);
    std::vector<nn::NetworkParams> targets;
    targets.reserve(result.members.size());
    for (std::size_t slot = 0; slot < result.members.size(); ++slot) {
      targets.push_back(result.duplicated[slot] ? result.members[slot].params
                                                : set.targets[result.sources[slot]]);
    }
    set.members = std::move(result.members);
    set.targets = std::move(targets);
    set.champion = 0;
  }
}

}  // namespace sparserl::agents
