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

#include "sparserl/harness/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparserl/agents/population_kernels.hpp"
#include "sparserl/agents/selection.hpp"
#include "sparserl/agents/value_based.hpp"
#include "sparserl/harness/checkpoint.hpp"
#include "sparserl/harness/evaluation.hpp"
#include "sparserl/replay/dataset.hpp"

namespace sparserl::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::unique_ptr<envs::Environment> environment_for(const ExperimentConfig& cfg) {
  const std::size_t horizon = cfg.horizon ? cfg.horizon : envs::default_horizon(cfg.env);
  return envs::make_environment(cfg.env, horizon, cfg.gamma);
}

nn::AdamConfig actor_adam(const ExperimentConfig& cfg) {
  nn::AdamConfig a = cfg.adam;
  a.learning_rate = cfg.actor_learning_rate;
  return a;
}

}  // namespace

void resolve_baselines(ExperimentConfig& config) {
  if (!std::isnan(config.norm_random) && !std::isnan(config.norm_reference)) return;
  const auto env = environment_for(config);
  RngStream rng(0, "baseline");
  const auto b = compute_baselines(*env, config.baseline_episodes, rng);
  config.norm_random = b.random_baseline;
  config.norm_reference = b.reference_score;
}

Trainer::Trainer(ExperimentConfig config) : config_(std::move(config)) {
  config_.validate();
  resolve_baselines(config_);
  env_ = environment_for(config_);
  init_state();
}

Trainer::Trainer(ExperimentConfig config, TrainerState state)
    : config_(std::move(config)), state_(std::move(state)) {
  config_.validate();
  env_ = environment_for(config_);
}

void Trainer::init_state() {
  const auto& spec = env_->spec();
  const RngStream root(config_.seed, "run");
  state_.env_rng = root.derive("env");
  state_.act_rng = root.derive("act");
  state_.sample_rng = root.derive("sample");
  state_.select_rng = root.derive("select");
  state_.policy_rng = root.derive("policy");
  state_.eval_rng = root.derive("eval");
  const RngStream init = root.derive("init");
  const std::size_t k_members = config_.population();

  if (is_sac(config_.algorithm)) {
    const auto box = spec.continuous();
    const auto specs = nn::mlp_specs(spec.observation_width + box.dimension, config_.hidden, 1);
    auto& twin = state_.sac.twin;
    twin.tau = config_.tau;
    twin.alpha = config_.alpha;
    twin.pruning_period = config_.pruning_period;
    std::int64_t lineage = 0;
    for (std::size_t i = 0; i < 2; ++i) {
      auto& set = twin.critics[i];
      for (std::size_t k = 0; k < k_members; ++k) {
        RngStream rng = init.derive("critic" + std::to_string(i + 1) + "/" + std::to_string(k));
        set.members.push_back(agents::Member::dense(nn::init_network(specs, rng), config_.adam, lineage++));
        set.targets.push_back(set.members.back().params);
      }
    }
    twin.next_lineage_id = lineage;
    RngStream actor_rng = init.derive("actor");
    state_.sac.policy = agents::GaussianPolicy::create(spec.observation_width, config_.actor_hidden,
                                                       box, actor_adam(config_), actor_rng);
    state_.behavior = {0, 0};
  } else {
    const auto specs = nn::mlp_specs(spec.observation_width, config_.hidden, spec.action_count());
    auto& pop = state_.population;
    for (std::size_t k = 0; k < k_members; ++k) {
      RngStream rng = init.derive("member/" + std::to_string(k));
      pop.members.push_back(agents::Member::dense(nn::init_network(specs, rng), config_.adam,
                                                  static_cast<std::int64_t>(k)));
    }
    pop.next_lineage_id = static_cast<std::int64_t>(k_members);
    pop.copy_target_from(0);
    state_.behavior = {0};
  }

  state_.log.population = k_members;
  state_.log.twin = is_sac(config_.algorithm);

  if (config_.offline_dataset.empty()) {
    state_.buffer = replay::ReplayBuffer(config_.buffer_capacity);
    state_.observation = env_->reset(state_.env_rng);
  } else {
    auto data = replay::load_dataset(config_.offline_dataset);
    if (data.source_env.id != spec.id || data.source_env.observation_width != spec.observation_width ||
        data.source_env.action_width() != spec.action_width()) {
      throw ConfigError("offline dataset was recorded on " + envs::to_string(data.source_env.id) +
                        ", config trains on " + envs::to_string(spec.id));
    }
    state_.buffer = replay::ReplayBuffer(std::max(config_.buffer_capacity, data.transitions.size()));
    for (auto& t : data.transitions) state_.buffer.push(std::move(t));
  }
}

TrainerState Trainer::snapshot() const {
  TrainerState s = state_;
  s.wallclock_offset = elapsed();
  return s;
}

double Trainer::elapsed() const {
  if (!config_.log_wallclock) return 0.0;
  const std::chrono::duration<double> d = std::chrono::steady_clock::now() - started_;
  return state_.wallclock_offset + d.count();
}

const agents::Member& Trainer::champion() const {
  if (is_sac(config_.algorithm)) {
    throw UnsupportedError("SAC runs deploy the actor, not a critic");
  }
  return state_.population.members.at(state_.population.champion);
}

void Trainer::run_until(std::int64_t step) {
  const std::int64_t stop = std::min(step, config_.total_steps);
  while (state_.step < stop) {
    const std::int64_t t = state_.step + 1;
    try {
      if (is_sac(config_.algorithm)) {
        step_sac(t);
      } else {
        step_value_based(t);
      }
    } catch (const NumericError& e) {
      std::optional<std::filesystem::path> dumped;
      if (abort_path_) {
        save_checkpoint(*abort_path_, config_, snapshot());
        dumped = abort_path_;
      }
      throw NumericAbort(NumericError("step " + std::to_string(t) + ": " + e.what(), e.layer()),
                         dumped);
    }
    state_.step = t;
  }
}

void Trainer::interact(std::int64_t, const envs::Action& action) {
  auto result = env_->step(state_.observation, action, state_.env_rng);
  state_.episode_accumulator += result.reward;
  ++state_.episode_length;
  const bool done = result.done;
  state_.buffer.push({state_.observation, action, result.reward, result.next_state, done});
  if (done || state_.episode_length >= env_->spec().horizon) {
    state_.last_episode_return = state_.episode_accumulator;
    ++state_.episodes;
    state_.episode_accumulator = 0.0;
    state_.episode_length = 0;
    state_.observation = env_->reset(state_.env_rng);
  } else {
    state_.observation = std::move(result.next_state);
  }
}

void Trainer::train_population(const replay::Batch& batch) {
  auto& pop = state_.population;
  const auto y = agents::td_targets(pop.target_params, pop.target_mask, batch, config_.gamma);
  if (config_.threads == 1) {
    agents::train_members_serial(pop.members, batch, y);
  } else {
    agents::train_members_parallel(pop.members, batch, y, config_.threads);
  }
}

void Trainer::step_value_based(std::int64_t t) {
  auto& pop = state_.population;
  if (config_.offline_dataset.empty()) {
    const auto probs = agents::behavior_distribution(agents::losses_of(pop.members));
    const std::size_t b = agents::sample_index(probs, state_.act_rng);
    state_.behavior = {b};
    const agents::EpsilonSchedule eps{config_.epsilon_start, config_.epsilon_end,
                                      config_.epsilon_decay_steps, config_.warmup};
    const auto action = agents::act_epsilon_greedy(pop.members[b], state_.observation, eps.at(t),
                                                   state_.act_rng);
    interact(t, action);
  } else {
    state_.behavior = {pop.champion};
  }

  if (t > config_.warmup && t % config_.gradient_period == 0) {
    for (std::int64_t u = 0; u < config_.utd; ++u) {
      const auto batch = state_.buffer.sample_batch(config_.batch_size, state_.sample_rng);
      train_population(batch);
      ++state_.gradient_steps;
      if (observer_) observer_->on_gradient_step(t, state_);
    }
  }
  const bool event = value_based_events(t);
  double eval_return = kNaN;
  const bool evaluated = config_.eval_period > 0 && t % config_.eval_period == 0;
  if (evaluated) evaluate(t, eval_return);
  if (event || evaluated || t % config_.log_period == 0) log_record(t, eval_return);
}

bool Trainer::value_based_events(std::int64_t t) {
  if (t <= config_.warmup) return false;
  auto& pop = state_.population;
  bool happened = false;
  if (t % config_.target_period == 0) {
    TrainingEvent ev;
    if (observer_) ev.population_before = pop;
    switch (config_.algorithm) {
      case Algorithm::eaude_dqn: {
        const auto losses = agents::losses_of(pop.members);
        const std::size_t psi = agents::select_target(losses);
        pop.copy_target_from(psi);
        const auto selection =
            agents::exploitation(losses, psi, config_.tournament_size, state_.select_rng);
        const std::int64_t t_next = std::min(t + config_.target_period, config_.total_steps);
        auto result = agents::exploration(pop.members, selection, t, std::max(t_next, t + 1),
                                          config_.eaude(), state_.select_rng, pop.next_lineage_id);
        if (observer_) {
          ev.champion = psi;
          ev.selection = selection;
          ev.duplicated = result.duplicated;
          for (auto s : result.sources) ev.source_lineage.push_back(pop.members[s].lineage_id);
        }
        pop.members = std::move(result.members);
        pop.champion = 0;
        break;
      }
      case Algorithm::distill_dqn:
        pop.copy_target_from(0);
        agents::distillqn_update(pop.members[0], config_.poly(), t);
        pop.members[0].cumulated_loss = 0.0;
        break;
      default:
        pop.copy_target_from(0);
        pop.members[0].cumulated_loss = 0.0;
        break;
    }
    if (observer_) {
      ev.kind = EventKind::target_update;
      ev.step = t;
      ev.population_after = pop;
      observer_->on_event(ev);
    }
    happened = true;
  }
  if (config_.algorithm == Algorithm::polyprune_dqn && t % config_.prune_period() == 0) {
    TrainingEvent ev;
    if (observer_) ev.population_before = pop;
    agents::prune_member(pop.members[0], pruning::poly_schedule(t, config_.poly()));
    if (observer_) {
      ev.kind = EventKind::prune;
      ev.step = t;
      ev.population_after = pop;
      observer_->on_event(ev);
    }
    happened = true;
  }
  return happened;
}

void Trainer::step_sac(std::int64_t t) {
  auto& twin = state_.sac.twin;
  auto& policy = state_.sac.policy;
  if (t <= config_.warmup) {
    const auto box = env_->spec().continuous();
    std::vector<double> a(box.dimension);
    for (double& x : a) x = state_.act_rng.uniform(box.low, box.high);
    interact(t, a);
  } else {
    auto sample = agents::sample_actions(policy, state_.observation, 1, state_.act_rng);
    interact(t, std::move(sample.actions));
  }

  if (t > config_.warmup && t % config_.gradient_period == 0) {
    for (std::int64_t u = 0; u < config_.utd; ++u) {
      const auto batch = state_.buffer.sample_batch(config_.batch_size, state_.sample_rng);
      const auto y = agents::sac_critic_targets(twin, policy, batch, config_.gamma, state_.policy_rng);
      if (config_.threads == 1) {
        agents::train_critics_serial(twin, batch, y);
      } else {
        agents::train_critics_parallel(twin, batch, y, config_.threads);
      }
      std::array<std::size_t, 2> behavior{};
      for (std::size_t i = 0; i < 2; ++i) {
        const auto losses = agents::losses_of(twin.critics[i].members);
        twin.critics[i].champion = agents::select_target(losses);
        behavior[i] = agents::sample_index(agents::behavior_distribution(losses), state_.select_rng);
      }
      state_.behavior = {behavior[0], behavior[1]};
      agents::sac_actor_update(policy, twin, batch, behavior, state_.policy_rng);
      ++state_.gradient_steps;
      if (observer_) observer_->on_gradient_step(t, state_);
    }
  }
  const bool event = sac_events(t);
  double eval_return = kNaN;
  const bool evaluated = config_.eval_period > 0 && t % config_.eval_period == 0;
  if (evaluated) evaluate(t, eval_return);
  if (event || evaluated || t % config_.log_period == 0) log_record(t, eval_return);
}

bool Trainer::sac_events(std::int64_t t) {
  if (t <= config_.warmup) return false;
  auto& twin = state_.sac.twin;
  const bool eaude = config_.algorithm == Algorithm::eaude_sac;
  const bool poly = config_.algorithm == Algorithm::polyprune_sac;
  if (!(eaude && t % config_.pruning_period == 0) && !(poly && t % config_.prune_period() == 0)) {
    return false;
  }
  TrainingEvent ev;
  if (observer_) ev.twin_before = twin;
  if (eaude) {
    const std::int64_t t_next = std::min(t + config_.pruning_period, config_.total_steps);
    agents::eaudesac_prune_event(twin, t, std::max(t_next, t + 1), config_.eaude(),
                                 state_.select_rng);
  } else {
    const double target = pruning::poly_schedule(t, config_.poly());
    for (auto& set : twin.critics) {
      for (auto& m : set.members) agents::prune_member(m, target);
    }
  }
  if (observer_) {
    ev.kind = EventKind::prune;
    ev.step = t;
    ev.twin_after = twin;
    observer_->on_event(ev);
  }
  return true;
}

void Trainer::evaluate(std::int64_t, double& eval_return) {
  if (is_sac(config_.algorithm)) {
    eval_return = evaluate_mean_action(state_.sac.policy, *env_, config_.eval_episodes,
                                       state_.eval_rng)
                      .mean;
  } else {
    const auto& m = champion();
    eval_return = evaluate_greedy(m.params, m.mask, *env_, config_.eval_episodes, state_.eval_rng).mean;
  }
}

void Trainer::log_record(std::int64_t t, double eval_return) {
  RunRecord r;
  r.step = t;
  r.wallclock_s = elapsed();
  r.episode_return = state_.last_episode_return;
  r.eval_return = eval_return;
  r.behavior = state_.behavior;
  if (is_sac(config_.algorithm)) {
    for (const auto& set : state_.sac.twin.critics) r.champion.push_back(set.champion);
    for (const auto& set : state_.sac.twin.critics) {
      for (const auto& m : set.members) r.sparsity.push_back(m.sparsity);
    }
    for (const auto& set : state_.sac.twin.critics) {
      for (const auto& m : set.members) r.loss.push_back(m.cumulated_loss);
    }
  } else {
    r.champion = {state_.population.champion};
    for (const auto& m : state_.population.members) r.sparsity.push_back(m.sparsity);
    for (const auto& m : state_.population.members) r.loss.push_back(m.cumulated_loss);
  }
  state_.log.append(std::move(r));
}

RunLog run_training(const ExperimentConfig& config) {
  Trainer trainer(config);
  trainer.run();
  return trainer.log();
}

}  // namespace sparserl::harness
