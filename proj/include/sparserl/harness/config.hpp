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
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "sparserl/envs/environment.hpp"
#include "sparserl/nncore/adam.hpp"
#include "sparserl/pruning/pruning.hpp"

namespace sparserl::harness {

enum class Algorithm { dqn, polyprune_dqn, distill_dqn, eaude_dqn, sac, polyprune_sac, eaude_sac };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);
bool is_sac(Algorithm a);
bool is_eaude(Algorithm a);
bool is_polyprune(Algorithm a);

// Everything a run needs. Loaded from flat `key = value` text; see
// config_keys() for the accepted names.
struct ExperimentConfig {
  Algorithm algorithm = Algorithm::dqn;
  envs::EnvId env = envs::EnvId::chain;
  std::uint64_t seed = 0;
  std::int64_t total_steps = 20000;
  std::size_t horizon = 0;  // 0: environment default
  double gamma = 0.99;

  std::int64_t gradient_period = 1;
  std::int64_t target_period = 500;
  std::int64_t utd = 1;
  std::size_t batch_size = 32;
  std::size_t buffer_capacity = 10000;
  std::int64_t warmup = 500;

  double epsilon_start = 1.0;
  double epsilon_end = 0.01;
  std::int64_t epsilon_decay_steps = 5000;

  std::vector<std::size_t> hidden = {32, 32};
  std::vector<std::size_t> actor_hidden = {32, 32};
  nn::AdamConfig adam;
  double actor_learning_rate = 1e-3;

  // SAC
  double tau = 0.005;
  double alpha = 0.2;
  std::int64_t pruning_period = 250;

  // PolyPrune: t_start and t_end are fractions of total_steps.
  double poly_final_sparsity = 0.95;
  double poly_exponent = 3.0;
  double poly_start_fraction = 0.2;
  double poly_end_fraction = 0.8;
  std::int64_t poly_period = 0;  // 0: target_period (value-based) or pruning_period (SAC)

  // EauDe
  double u_max = 3.0;
  double s_max = 0.01;
  std::size_t population_size = 5;
  std::size_t tournament_size = 3;

  std::int64_t eval_period = 0;  // 0: no evaluation
  std::size_t eval_episodes = 5;
  std::int64_t log_period = 100;
  bool log_wallclock = false;

  // NaN: computed by in-repo rollouts at startup.
  double norm_random = std::numeric_limits<double>::quiet_NaN();
  double norm_reference = std::numeric_limits<double>::quiet_NaN();
  std::size_t baseline_episodes = 10000;

  std::string offline_dataset;  // empty: online interaction
  int threads = 1;

  // Throws ConfigError naming the offending key.
  void validate() const;

  std::size_t population() const;  // K for value-based or per critic
  pruning::PolyPruneConfig poly() const;
  pruning::EauDeConfig eaude() const;
  std::int64_t prune_period() const;

  // Compares canonical text, so NaN baselines compare equal.
  bool operator==(const ExperimentConfig& other) const;
};

// Desk-scale defaults for an (algorithm, environment) pair.
ExperimentConfig preset(Algorithm algorithm, envs::EnvId env);

std::vector<std::string> config_keys();

// Sets one key. Throws ConfigError for unknown keys or unparsable values.
void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);
std::string get_key(const ExperimentConfig& cfg, const std::string& key);

// `algorithm` and `env` pick the preset; every other key overrides it.
// Blank lines and `#` comments are ignored.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical text, every key in config_keys() order. Round-trips exactly.
std::string to_text(const ExperimentConfig& cfg);

// Hash of every key that influences results (threads and wallclock excluded).
std::uint64_t config_digest(const ExperimentConfig& cfg);

}  // namespace sparserl::harness
