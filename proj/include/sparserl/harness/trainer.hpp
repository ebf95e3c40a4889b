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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "sparserl/agents/member.hpp"
#include "sparserl/agents/sac.hpp"
#include "sparserl/common/errors.hpp"
#include "sparserl/common/rng.hpp"
#include "sparserl/envs/environment.hpp"
#include "sparserl/harness/config.hpp"
#include "sparserl/harness/run_log.hpp"
#include "sparserl/replay/replay_buffer.hpp"

namespace sparserl::harness {

struct SacAgent {
  agents::TwinCriticPopulation twin;
  agents::GaussianPolicy policy;
  bool operator==(const SacAgent&) const = default;
};

// Everything a run carries from one step to the next.
struct TrainerState {
  std::int64_t step = 0;  // environment steps completed
  std::uint64_t gradient_steps = 0;
  agents::Population population;  // value-based runs
  SacAgent sac;                   // SAC runs
  replay::ReplayBuffer buffer{1};
  std::vector<double> observation;
  double episode_accumulator = 0.0;
  std::uint64_t episode_length = 0;
  std::uint64_t episodes = 0;
  double last_episode_return = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::size_t> behavior;
  RngStream env_rng;
  RngStream act_rng;
  RngStream sample_rng;
  RngStream select_rng;
  RngStream policy_rng;
  RngStream eval_rng;
  double wallclock_offset = 0.0;
  RunLog log;

  bool operator==(const TrainerState&) const = default;
};

enum class EventKind { target_update, prune };

// Snapshot around one selection or pruning event. `before`/`after` hold the
// population (value-based) or the twin critics (SAC).
struct TrainingEvent {
  EventKind kind = EventKind::target_update;
  std::int64_t step = 0;
  std::size_t champion = 0;                 // value-based: promoted index
  std::vector<std::size_t> selection;       // eaude_dqn: exploitation output
  std::vector<bool> duplicated;             // eaude_dqn: per slot
  std::vector<std::int64_t> source_lineage; // eaude_dqn: lineage id of each slot's source
  agents::Population population_before;
  agents::Population population_after;
  agents::TwinCriticPopulation twin_before;
  agents::TwinCriticPopulation twin_after;
};

class TrainingObserver {
 public:
  virtual ~TrainingObserver() = default;
  virtual void on_gradient_step(std::int64_t /*step*/, const TrainerState& /*state*/) {}
  virtual void on_event(const TrainingEvent& /*event*/) {}
};

// A non-finite value stopped the run; `checkpoint` holds the dump, if any.
class NumericAbort : public NumericError {
 public:
  NumericAbort(const NumericError& cause, std::optional<std::filesystem::path> checkpoint)
      : NumericError(cause.what(), cause.layer()), checkpoint_(std::move(checkpoint)) {}
  const std::optional<std::filesystem::path>& checkpoint() const { return checkpoint_; }

 private:
  std::optional<std::filesystem::path> checkpoint_;
};

class Trainer {
 public:
  // Validates the config (ConfigError before any work) and resolves missing
  // normalization baselines.
  explicit Trainer(ExperimentConfig config);
  // Continues from a saved state; the caller has checked the digest.
  Trainer(ExperimentConfig config, TrainerState state);

  const ExperimentConfig& config() const { return config_; }
  const TrainerState& state() const { return state_; }
  const envs::Environment& environment() const { return *env_; }
  const RunLog& log() const { return state_.log; }
  // Copy of the state with the wallclock offset brought up to date.
  TrainerState snapshot() const;

  void set_observer(TrainingObserver* observer) { observer_ = observer; }
  // Where a checkpoint is written if a numeric failure aborts the run.
  void set_abort_checkpoint(std::filesystem::path path) { abort_path_ = std::move(path); }

  void run() { run_until(config_.total_steps); }
  // Advances until `step` environment steps are done (capped at total_steps).
  void run_until(std::int64_t step);
  bool finished() const { return state_.step >= config_.total_steps; }

  // Network that would be deployed now: the value-based champion.
  const agents::Member& champion() const;

 private:
  void init_state();
  void step_value_based(std::int64_t t);
  void step_sac(std::int64_t t);
  void interact(std::int64_t t, const envs::Action& action);
  bool value_based_events(std::int64_t t);
  bool sac_events(std::int64_t t);
  void evaluate(std::int64_t t, double& eval_return);
  void log_record(std::int64_t t, double eval_return);
  void train_population(const replay::Batch& batch);
  double elapsed() const;

  ExperimentConfig config_;
  std::unique_ptr<envs::Environment> env_;
  TrainerState state_;
  TrainingObserver* observer_ = nullptr;
  std::optional<std::filesystem::path> abort_path_;
  std::chrono::steady_clock::time_point started_ = std::chrono::steady_clock::now();
};

// Resolves baselines, trains to total_steps and returns the log.
RunLog run_training(const ExperimentConfig& config);

// Fills NaN baselines in `config` from in-repo rollouts.
void resolve_baselines(ExperimentConfig& config);

}  // namespace sparserl::harness
