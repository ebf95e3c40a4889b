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

// sparserl command-line entry point: train, evaluate, aggregate, inspect,
// collect.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparserl/agents/value_based.hpp"
#include "sparserl/common/errors.hpp"
#include "sparserl/harness/aggregate.hpp"
#include "sparserl/harness/checkpoint.hpp"
#include "sparserl/harness/config.hpp"
#include "sparserl/harness/evaluation.hpp"
#include "sparserl/harness/trainer.hpp"
#include "sparserl/replay/dataset.hpp"

namespace fs = std::filesystem;
using namespace sparserl;
using namespace sparserl::harness;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct TrainArgs {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<int> threads;
  std::string resume;
  std::int64_t stop_at = 0;
  std::vector<std::string> overrides;
};

void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& overrides) {
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    set_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int run_train(const TrainArgs& args) {
  ExperimentConfig cfg = load_config(args.config);
  cfg.seed = args.seed;
  apply_overrides(cfg, args.overrides);
  if (args.threads) cfg.threads = *args.threads;
  cfg.validate();
  resolve_baselines(cfg);

  const fs::path out = args.out.empty()
                           ? fs::path("runs") / (to_string(cfg.algorithm) + "_" +
                                                 envs::to_string(cfg.env) + "_seed" +
                                                 std::to_string(cfg.seed))
                           : fs::path(args.out);
  fs::create_directories(out);
  write_text(out / "config.txt", to_text(cfg));

  std::optional<Trainer> trainer;
  if (args.resume.empty()) {
    trainer.emplace(cfg);
  } else {
    trainer.emplace(resume_trainer(cfg, load_checkpoint(args.resume)));
    std::cout << "resumed at step " << trainer->state().step << "\n";
  }
  trainer->set_abort_checkpoint(out / "abort.ckpt");
  try {
    trainer->run_until(args.stop_at > 0 ? args.stop_at : cfg.total_steps);
  } catch (const NumericAbort& e) {
    write_csv(trainer->log(), out / "log.csv");
    std::cerr << "numeric abort: " << e.what() << "\n";
    if (e.checkpoint()) std::cerr << "state dumped to " << e.checkpoint()->string() << "\n";
    return kExitNumeric;
  }
  write_csv(trainer->log(), out / "log.csv");
  save_checkpoint(out / "checkpoint.bin", cfg, trainer->snapshot());

  const auto& s = trainer->state();
  std::cout << to_string(cfg.algorithm) << " on " << envs::to_string(cfg.env) << ", seed "
            << cfg.seed << ": " << s.step << " steps, " << s.gradient_steps
            << " gradient steps, " << s.episodes << " episodes\n";
  if (!s.log.records.empty()) {
    const auto& last = s.log.records.back();
    std::cout << "last episode return " << format_real(last.episode_return) << "\n";
  }
  std::cout << "wrote " << (out / "log.csv").string() << "\n";
  return kExitOk;
}

std::unique_ptr<envs::Environment> environment_for(const ExperimentConfig& cfg) {
  const std::size_t horizon = cfg.horizon ? cfg.horizon : envs::default_horizon(cfg.env);
  return envs::make_environment(cfg.env, horizon, cfg.gamma);
}

int run_evaluate(const std::string& path, std::size_t episodes, std::uint64_t seed) {
  const auto ckpt = load_checkpoint(path);
  const auto env = environment_for(ckpt.config);
  RngStream rng(seed, "evaluate");
  EvaluationResult result;
  if (is_sac(ckpt.config.algorithm)) {
    result = evaluate_mean_action(ckpt.state.sac.policy, *env, episodes, rng);
  } else {
    const auto& pop = ckpt.state.population;
    const auto& m = pop.members.at(pop.champion);
    result = evaluate_greedy(m.params, m.mask, *env, episodes, rng);
  }
  std::cout << "episodes " << episodes << "\n";
  std::cout << "mean_return " << format_real(result.mean) << "\n";
  std::cout << "standard_error " << format_real(result.standard_error()) << "\n";
  if (!std::isnan(ckpt.config.norm_random) && !std::isnan(ckpt.config.norm_reference)) {
    std::cout << "normalized_return "
              << format_real(envs::normalized_return(
                     result.mean, {ckpt.config.norm_random, ckpt.config.norm_reference}))
              << "\n";
  }
  return kExitOk;
}

void print_members(const std::string& label, const std::vector<agents::Member>& members,
                   std::size_t champion) {
  std::printf("%s champion %zu\n", label.c_str(), champion);
  std::printf("  %-6s %-8s %-10s %s\n", "member", "lineage", "sparsity", "loss");
  for (std::size_t k = 0; k < members.size(); ++k) {
    std::printf("  %-6zu %-8lld %-10.6f %s%s\n", k, static_cast<long long>(members[k].lineage_id),
                members[k].sparsity, format_real(members[k].cumulated_loss).c_str(),
                k == champion ? "  *" : "");
  }
}

int run_inspect(const std::string& path) {
  const auto ckpt = load_checkpoint(path);
  const auto& s = ckpt.state;
  std::printf("algorithm %s\nenv %s\nseed %llu\nstep %lld of %lld\ngradient_steps %llu\n",
              to_string(ckpt.config.algorithm).c_str(), envs::to_string(ckpt.config.env).c_str(),
              static_cast<unsigned long long>(ckpt.config.seed), static_cast<long long>(s.step),
              static_cast<long long>(ckpt.config.total_steps),
              static_cast<unsigned long long>(s.gradient_steps));
  std::printf("digest %016llx\nreplay %zu / %zu\n", static_cast<unsigned long long>(ckpt.digest),
              s.buffer.size(), s.buffer.capacity());
  if (is_sac(ckpt.config.algorithm)) {
    print_members("critic 1", s.sac.twin.critics[0].members, s.sac.twin.critics[0].champion);
    print_members("critic 2", s.sac.twin.critics[1].members, s.sac.twin.critics[1].champion);
  } else {
    print_members("population", s.population.members, s.population.champion);
  }
  return kExitOk;
}

int run_aggregate(const std::string& runs, const std::string& out, const std::string& metric,
                  std::size_t resamples, std::uint64_t seed) {
  AggregateOptions options;
  options.metric = metric == "eval" ? ReturnColumn::eval : ReturnColumn::episode;
  options.resamples = resamples;
  options.seed = seed;
  const auto rows = aggregate_directory(runs, options);
  write_text(out, aggregate_csv(rows));
  std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
  return kExitOk;
}

int run_collect(const std::string& env_name, std::int64_t steps, const std::string& out,
                const std::string& checkpoint, double epsilon, std::uint64_t seed) {
  replay::OfflineDataset data;
  std::optional<Checkpoint> ckpt;
  if (!checkpoint.empty()) ckpt = load_checkpoint(checkpoint);
  const auto env_id = ckpt ? ckpt->config.env : envs::env_id_from_string(env_name);
  const auto env = ckpt ? environment_for(ckpt->config) : envs::make_environment(env_id);
  if (!env->spec().discrete()) throw ConfigError("collect supports discrete-action environments");
  data.source_env = env->spec();
  RngStream env_rng(seed, "collect/env");
  RngStream act_rng(seed, "collect/act");
  auto state = env->reset(env_rng);
  std::size_t length = 0;
  for (std::int64_t t = 0; t < steps; ++t) {
    std::size_t a = 0;
    if (ckpt) {
      const auto& pop = ckpt->state.population;
      a = agents::act_epsilon_greedy(pop.members.at(pop.champion), state, epsilon, act_rng);
    } else {
      a = static_cast<std::size_t>(act_rng.uniform_index(env->spec().action_count()));
    }
    auto r = env->step(state, a, env_rng);
    data.transitions.push_back({state, a, r.reward, r.next_state, r.done});
    if (r.done || ++length >= env->spec().horizon) {
      state = env->reset(env_rng);
      length = 0;
    } else {
      state = std::move(r.next_state);
    }
  }
  replay::save_dataset(data, out);
  std::cout << "wrote " << data.transitions.size() << " transitions to " << out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse value-based and actor-critic training with population pruning"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train one run and write log.csv, config.txt, checkpoint.bin");
  train_cmd->add_option("--config", train.config, "Config file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--seed", train.seed, "Run seed")->required();
  train_cmd->add_option("--out", train.out, "Output directory");
  train_cmd->add_option("--threads", train.threads, "Worker threads for member updates (0: all)");
  train_cmd->add_option("--resume", train.resume, "Continue from a checkpoint")->check(CLI::ExistingFile);
  train_cmd->add_option("--stop-at", train.stop_at, "Stop after this many environment steps");
  train_cmd->add_option("--set", train.overrides, "Override a config key (key=value)");

  std::string eval_ckpt;
  std::size_t eval_episodes = 10;
  std::uint64_t eval_seed = 0;
  auto* eval_cmd = app.add_subcommand("evaluate", "Roll out the deployed policy of a checkpoint");
  eval_cmd->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--episodes", eval_episodes, "Episodes")->required()->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval_seed, "Evaluation seed");

  std::string runs_dir;
  std::string agg_out;
  std::string metric = "episode";
  std::size_t resamples = 2000;
  std::uint64_t agg_seed = 0;
  auto* agg_cmd = app.add_subcommand("aggregate", "IQM and bootstrap intervals across run directories");
  agg_cmd->add_option("--runs", runs_dir, "Directory of run directories")->required()->check(CLI::ExistingDirectory);
  agg_cmd->add_option("--out", agg_out, "Output CSV")->required();
  agg_cmd->add_option("--metric", metric, "Return column")->check(CLI::IsMember({"episode", "eval"}));
  agg_cmd->add_option("--resamples", resamples, "Bootstrap resamples")->check(CLI::PositiveNumber);
  agg_cmd->add_option("--seed", agg_seed, "Bootstrap seed");

  std::string inspect_ckpt;
  auto* inspect_cmd = app.add_subcommand("inspect", "Print per-member sparsity, losses and champion");
  inspect_cmd->add_option("--checkpoint", inspect_ckpt, "Checkpoint file")->required()->check(CLI::ExistingFile);

  std::string collect_env = "chain";
  std::int64_t collect_steps = 10000;
  std::string collect_out;
  std::string collect_ckpt;
  double collect_eps = 0.1;
  std::uint64_t collect_seed = 0;
  auto* collect_cmd = app.add_subcommand("collect", "Record an offline dataset");
  collect_cmd->add_option("--env", collect_env, "Environment when no checkpoint is given");
  collect_cmd->add_option("--steps", collect_steps, "Transitions to record")->check(CLI::PositiveNumber);
  collect_cmd->add_option("--out", collect_out, "Dataset file")->required();
  collect_cmd->add_option("--checkpoint", collect_ckpt, "Behave epsilon-greedily w.r.t. this champion");
  collect_cmd->add_option("--epsilon", collect_eps, "Exploration rate with --checkpoint");
  collect_cmd->add_option("--seed", collect_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*train_cmd) return run_train(train);
    if (*eval_cmd) return run_evaluate(eval_ckpt, eval_episodes, eval_seed);
    if (*agg_cmd) return run_aggregate(runs_dir, agg_out, metric, resamples, agg_seed);
    if (*inspect_cmd) return run_inspect(inspect_ckpt);
    if (*collect_cmd) {
      return run_collect(collect_env, collect_steps, collect_out, collect_ckpt, collect_eps, collect_seed);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
