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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sparserl/common/errors.hpp"
#include "sparserl/envs/environment.hpp"

namespace sparserl::envs {

std::string to_string(EnvId id) {
  switch (id) {
    case EnvId::chain:
      return "chain";
    case EnvId::gridworld:
      return "gridworld";
    case EnvId::cartpole:
      return "cartpole";
    case EnvId::pendulum:
      return "pendulum";
  }
  return "?";
}

EnvId env_id_from_string(const std::string& name) {
  for (EnvId id : {EnvId::chain, EnvId::gridworld, EnvId::cartpole, EnvId::pendulum}) {
    if (to_string(id) == name) return id;
  }
  throw ConfigError("unknown environment '" + name + "'");
}

std::size_t EnvSpec::action_count() const {
  if (!discrete()) throw ArgumentError("action_count on a continuous action space");
  return std::get<DiscreteActions>(action_space).count;
}

ContinuousActions EnvSpec::continuous() const {
  if (discrete()) throw ArgumentError("continuous() on a discrete action space");
  return std::get<ContinuousActions>(action_space);
}

std::size_t EnvSpec::action_width() const {
  return discrete() ? 1 : std::get<ContinuousActions>(action_space).dimension;
}

// --- tabular ---------------------------------------------------------------

std::vector<double> TabularEnvironment::observation(std::size_t s) const {
  std::vector<double> obs(num_states(), 0.0);
  obs.at(s) = 1.0;
  return obs;
}

std::size_t TabularEnvironment::state_index(std::span<const double> observation) const {
  if (observation.size() != num_states()) throw ArgumentError("observation width mismatch");
  const auto it = std::find(observation.begin(), observation.end(), 1.0);
  if (it == observation.end()) throw ArgumentError("observation is not one-hot");
  return static_cast<std::size_t>(it - observation.begin());
}

std::size_t TabularEnvironment::checked_action(const Action& action) const {
  const auto* a = std::get_if<std::size_t>(&action);
  if (a == nullptr) throw ArgumentError("tabular environment expects a discrete action");
  if (*a >= num_actions()) {
    throw ArgumentError("action " + std::to_string(*a) + " out of range for " +
                        to_string(spec_.id));
  }
  return *a;
}

std::vector<double> TabularEnvironment::reset(RngStream&) const {
  return observation(start_state());
}

StepResult TabularEnvironment::step(std::span<const double> state, const Action& action,
                                    RngStream&) const {
  const std::size_t a = checked_action(action);
  const auto o = outcome(state_index(state), a);
  return {observation(o.next_state), o.reward, o.done};
}

ChainEnv::ChainEnv(std::size_t n, std::size_t horizon, double discount)
    : TabularEnvironment(EnvSpec{EnvId::chain, n, DiscreteActions{2}, horizon, discount}), n_(n) {
  if (n < 2) throw ConfigError("chain needs at least 2 states");
}

TabularOutcome ChainEnv::outcome(std::size_t s, std::size_t a) const {
  if (terminal(s)) return {s, 0.0, true};
  const std::size_t next = a == 1 ? s + 1 : (s == 0 ? 0 : s - 1);
  const bool done = terminal(next);
  return {next, done ? 1.0 : 0.0, done};
}

GridWorldEnv::GridWorldEnv(std::size_t side, std::size_t horizon, double discount)
    : TabularEnvironment(
          EnvSpec{EnvId::gridworld, side * side, DiscreteActions{4}, horizon, discount}),
      side_(side) {
  if (side < 2) throw ConfigError("gridworld side must be >= 2");
}

TabularOutcome GridWorldEnv::outcome(std::size_t s, std::size_t a) const {
  if (terminal(s)) return {s, 0.0, true};
  std::size_t row = s / side_;
  std::size_t col = s % side_;
  switch (a) {
    case 0:
      row = row == 0 ? 0 : row - 1;
      break;
    case 1:
      row = std::min(row + 1, side_ - 1);
      break;
    case 2:
      col = col == 0 ? 0 : col - 1;
      break;
    default:
      col = std::min(col + 1, side_ - 1);
      break;
  }
  const std::size_t next = row * side_ + col;
  const bool done = terminal(next);
  return {next, done ? 1.0 : 0.0, done};
}

// --- cart-pole -------------------------------------------------------------

CartPoleEnv::CartPoleEnv(std::size_t horizon, double discount)
    : Environment(EnvSpec{EnvId::cartpole, 4, DiscreteActions{2}, horizon, discount}) {}

std::vector<double> CartPoleEnv::reset(RngStream& rng) const {
  std::vector<double> s(4);
  for (double& v : s) v = rng.uniform(-0.05, 0.05);
  return s;
}

StepResult CartPoleEnv::step(std::span<const double> state, const Action& action,
                             RngStream&) const {
  const auto* a = std::get_if<std::size_t>(&action);
  if (a == nullptr || *a > 1) throw ArgumentError("cartpole expects action 0 or 1");
  if (state.size() != 4) throw ArgumentError("cartpole state must have 4 coordinates");
  double x = state[0], x_dot = state[1], theta = state[2], theta_dot = state[3];

  constexpr double total_mass = kCartMass + kPoleMass;
  constexpr double pole_mass_length = kPoleMass * kHalfLength;
  const double force = *a == 1 ? kForce : -kForce;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double temp = (force + pole_mass_length * theta_dot * theta_dot * sin_t) / total_mass;
  const double theta_acc = (kGravity * sin_t - cos_t * temp) /
                           (kHalfLength * (4.0 / 3.0 - kPoleMass * cos_t * cos_t / total_mass));
  const double x_acc = temp - pole_mass_length * theta_acc * cos_t / total_mass;

  x += kDt * x_dot;
  x_dot += kDt * x_acc;
  theta += kDt * theta_dot;
  theta_dot += kDt * theta_acc;

  const bool done = x < -kXLimit || x > kXLimit || theta < -kThetaLimit || theta > kThetaLimit;
  return {{x, x_dot, theta, theta_dot}, 1.0, done};
}

// --- pendulum --------------------------------------------------------------

PendulumEnv::PendulumEnv(std::size_t horizon, double discount)
    : Environment(EnvSpec{EnvId::pendulum, 3, ContinuousActions{1, -kMaxTorque, kMaxTorque},
                          horizon, discount}) {}

std::vector<double> PendulumEnv::reset(RngStream& rng) const {
  const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
  const double theta_dot = rng.uniform(-1.0, 1.0);
  return {std::cos(theta), std::sin(theta), theta_dot};
}

namespace {

double wrap_angle(double theta) {
  return std::remainder(theta, 2.0 * std::numbers::pi);
}

}  // namespace

double PendulumEnv::reward(double theta, double theta_dot, double torque) {
  const double th = wrap_angle(theta);
  return -(th * th + 0.1 * theta_dot * theta_dot + 0.001 * torque * torque);
}

StepResult PendulumEnv::step(std::span<const double> state, const Action& action,
                             RngStream&) const {
  const auto* a = std::get_if<std::vector<double>>(&action);
  if (a == nullptr || a->size() != 1 || !std::isfinite((*a)[0])) {
    throw ArgumentError("pendulum expects one finite torque value");
  }
  if (state.size() != 3) throw ArgumentError("pendulum state must have 3 coordinates");
  const double theta = std::atan2(state[1], state[0]);
  const double theta_dot = state[2];
  const double u = std::clamp((*a)[0], -kMaxTorque, kMaxTorque);

  const double r = reward(theta, theta_dot, u);
  double new_dot = theta_dot + (3.0 * kGravity / (2.0 * kLength) * std::sin(theta) +
                                3.0 / (kMass * kLength * kLength) * u) *
                                   kDt;
  new_dot = std::clamp(new_dot, -kMaxSpeed, kMaxSpeed);
  const double new_theta = theta + new_dot * kDt;
  return {{std::cos(new_theta), std::sin(new_theta), new_dot}, r, false};
}

// --- factory ---------------------------------------------------------------

std::size_t default_horizon(EnvId id) {
  switch (id) {
    case EnvId::chain:
    case EnvId::gridworld:
      return 100;
    case EnvId::cartpole:
      return 500;
    case EnvId::pendulum:
      return 200;
  }
  return 1;
}

std::unique_ptr<Environment> make_environment(EnvId id, std::size_t horizon, double discount) {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (!(discount > 0.0 && discount < 1.0)) throw ConfigError("discount must lie in (0, 1)");
  switch (id) {
    case EnvId::chain:
      return std::make_unique<ChainEnv>(10, horizon, discount);
    case EnvId::gridworld:
      return std::make_unique<GridWorldEnv>(5, horizon, discount);
    case EnvId::cartpole:
      return std::make_unique<CartPoleEnv>(horizon, discount);
    case EnvId::pendulum:
      return std::make_unique<PendulumEnv>(horizon, discount);
  }
  throw ConfigError("unknown environment");
}

std::unique_ptr<Environment> make_environment(EnvId id) {
  return make_environment(id, default_horizon(id), 0.99);
}

double normalized_return(double raw, const NormalizationBaselines& baselines) {
  const double span = baselines.reference_score - baselines.random_baseline;
  if (span == 0.0 || !std::isfinite(span)) {
    throw ConfigError("normalization baselines are degenerate");
  }
  return (raw - baselines.random_baseline) / span;
}

}  // namespace sparserl::envs
