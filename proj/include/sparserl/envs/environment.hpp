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
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sparserl/common/rng.hpp"

namespace sparserl::envs {

enum class EnvId { chain, gridworld, cartpole, pendulum };

std::string to_string(EnvId id);
// Throws ConfigError for unknown names.
EnvId env_id_from_string(const std::string& name);

struct DiscreteActions {
  std::size_t count = 0;
  bool operator==(const DiscreteActions&) const = default;
};

struct ContinuousActions {
  std::size_t dimension = 0;
  double low = -1.0;
  double high = 1.0;
  bool operator==(const ContinuousActions&) const = default;
};

struct EnvSpec {
  EnvId id = EnvId::chain;
  std::size_t observation_width = 0;
  std::variant<DiscreteActions, ContinuousActions> action_space;
  std::size_t horizon = 1;
  double discount = 0.99;

  bool discrete() const { return std::holds_alternative<DiscreteActions>(action_space); }
  std::size_t action_count() const;      // discrete only
  ContinuousActions continuous() const;  // continuous only
  // Width of the action as stored in a record: 1 for discrete, else dimension.
  std::size_t action_width() const;
};

// Discrete index or continuous vector.
using Action = std::variant<std::size_t, std::vector<double>>;

struct Transition {
  std::vector<double> state;
  Action action;
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;  // true termination only, never horizon truncation

  bool operator==(const Transition&) const = default;
};

struct StepResult {
  std::vector<double> next_state;
  double reward = 0.0;
  bool done = false;
};

// Environments are stateless: the observation fully determines the dynamics
// state, so step() maps (observation, action) to the next observation.
class Environment {
 public:
  explicit Environment(EnvSpec spec) : spec_(std::move(spec)) {}
  virtual ~Environment() = default;

  const EnvSpec& spec() const { return spec_; }
  virtual std::vector<double> reset(RngStream& rng) const = 0;
  // Throws ArgumentError for an invalid action.
  virtual StepResult step(std::span<const double> state, const Action& action,
                          RngStream& rng) const = 0;

 protected:
  EnvSpec spec_;
};

struct TabularOutcome {
  std::size_t next_state = 0;
  double reward = 0.0;
  bool done = false;
};

// Finite deterministic MDP observed through one-hot vectors.
class TabularEnvironment : public Environment {
 public:
  using Environment::Environment;

  virtual std::size_t num_states() const = 0;
  std::size_t num_actions() const { return spec_.action_count(); }
  virtual std::size_t start_state() const = 0;
  virtual bool terminal(std::size_t s) const = 0;
  virtual TabularOutcome outcome(std::size_t s, std::size_t a) const = 0;

  std::vector<double> observation(std::size_t s) const;
  std::size_t state_index(std::span<const double> observation) const;

  std::vector<double> reset(RngStream& rng) const override;
  StepResult step(std::span<const double> state, const Action& action,
                  RngStream& rng) const override;

 protected:
  std::size_t checked_action(const Action& action) const;
};

// States 0..n-1, actions {0: left, 1: right}. Entering n-1 pays 1 and ends the
// episode; left at 0 is a wall.
class ChainEnv final : public TabularEnvironment {
 public:
  explicit ChainEnv(std::size_t n = 10, std::size_t horizon = 100, double discount = 0.99);
  std::size_t num_states() const override { return n_; }
  std::size_t start_state() const override { return 0; }
  bool terminal(std::size_t s) const override { return s == n_ - 1; }
  TabularOutcome outcome(std::size_t s, std::size_t a) const override;

 private:
  std::size_t n_;
};

// side x side grid, start (0,0), terminal goal (side-1, side-1) paying 1.
// Actions {0: up, 1: down, 2: left, 3: right}; moves into walls clamp.
class GridWorldEnv final : public TabularEnvironment {
 public:
  explicit GridWorldEnv(std::size_t side = 5, std::size_t horizon = 100, double discount = 0.99);
  std::size_t num_states() const override { return side_ * side_; }
  std::size_t start_state() const override { return 0; }
  bool terminal(std::size_t s) const override { return s == side_ * side_ - 1; }
  TabularOutcome outcome(std::size_t s, std::size_t a) const override;
  std::size_t side() const { return side_; }

 private:
  std::size_t side_;
};

// Classic cart-pole with explicit Euler integration. Observation
// (x, x_dot, theta, theta_dot); actions {0: push left, 1: push right}.
class CartPoleEnv final : public Environment {
 public:
  static constexpr double kGravity = 9.8;
  static constexpr double kCartMass = 1.0;
  static constexpr double kPoleMass = 0.1;
  static constexpr double kHalfLength = 0.5;
  static constexpr double kForce = 10.0;
  static constexpr double kDt = 0.02;
  static constexpr double kThetaLimit = 12.0 * 2.0 * 3.14159265358979323846 / 360.0;
  static constexpr double kXLimit = 2.4;

  explicit CartPoleEnv(std::size_t horizon = 500, double discount = 0.99);
  std::vector<double> reset(RngStream& rng) const override;
  StepResult step(std::span<const double> state, const Action& action,
                  RngStream& rng) const override;
};

// Torque-limited pendulum, upright at theta = 0. Observation
// (cos theta, sin theta, theta_dot); one continuous torque in [-2, 2].
class PendulumEnv final : public Environment {
 public:
  static constexpr double kGravity = 10.0;
  static constexpr double kMass = 1.0;
  static constexpr double kLength = 1.0;
  static constexpr double kDt = 0.05;
  static constexpr double kMaxTorque = 2.0;
  static constexpr double kMaxSpeed = 8.0;

  explicit PendulumEnv(std::size_t horizon = 200, double discount = 0.99);
  std::vector<double> reset(RngStream& rng) const override;
  StepResult step(std::span<const double> state, const Action& action,
                  RngStream& rng) const override;

  static double reward(double theta, double theta_dot, double torque);
};

// Environment with its default horizon and discount.
std::unique_ptr<Environment> make_environment(EnvId id);
std::unique_ptr<Environment> make_environment(EnvId id, std::size_t horizon, double discount);
std::size_t default_horizon(EnvId id);

struct NormalizationBaselines {
  double random_baseline = 0.0;
  double reference_score = 1.0;
};

// (raw - random) / (reference - random); ConfigError when the two coincide.
double normalized_return(double raw, const NormalizationBaselines& baselines);

}  // namespace sparserl::envs
