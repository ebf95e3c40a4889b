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

#include "sparserl/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "sparserl/common/errors.hpp"

namespace sparserl::harness {

namespace {

const std::vector<std::pair<Algorithm, std::string>>& algorithm_names() {
  static const std::vector<std::pair<Algorithm, std::string>> names = {
      {Algorithm::dqn, "dqn"},
      {Algorithm::polyprune_dqn, "polyprune_dqn"},
      {Algorithm::distill_dqn, "distill_dqn"},
      {Algorithm::eaude_dqn, "eaude_dqn"},
      {Algorithm::sac, "sac"},
      {Algorithm::polyprune_sac, "polyprune_sac"},
      {Algorithm::eaude_sac, "eaude_sac"},
  };
  return names;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto r = std::from_chars(value.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  if (value == "nan") return std::numeric_limits<double>::quiet_NaN();
  return parse_number<double>(key, value);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + value + "'");
}

std::vector<std::size_t> parse_widths(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<std::size_t>(key, trim(item)));
  return out;
}

std::string format_widths(const std::vector<std::size_t>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s;
}

struct KeyHandler {
  std::string name;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  bool digest = true;
};

#define SRL_INT_KEY(key, field, type)                                              \
  KeyHandler{key, [](const ExperimentConfig& c) { return std::to_string(c.field); }, \
             [](ExperimentConfig& c, const std::string& v) { c.field = parse_number<type>(key, v); }}
#define SRL_DOUBLE_KEY(key, field)                                                 \
  KeyHandler{key, [](const ExperimentConfig& c) { return format_double(c.field); }, \
             [](ExperimentConfig& c, const std::string& v) { c.field = parse_double(key, v); }}

const std::vector<KeyHandler>& handlers() {
  static const std::vector<KeyHandler> table = {
      KeyHandler{"algorithm", [](const ExperimentConfig& c) { return to_string(c.algorithm); },
                 [](ExperimentConfig& c, const std::string& v) { c.algorithm = algorithm_from_string(v); }},
      KeyHandler{"env", [](const ExperimentConfig& c) { return envs::to_string(c.env); },
                 [](ExperimentConfig& c, const std::string& v) { c.env = envs::env_id_from_string(v); }},
      SRL_INT_KEY("seed", seed, std::uint64_t),
      SRL_INT_KEY("total_steps", total_steps, std::int64_t),
      SRL_INT_KEY("env.horizon", horizon, std::size_t),
      SRL_DOUBLE_KEY("env.gamma", gamma),
      SRL_INT_KEY("train.gradient_period", gradient_period, std::int64_t),
      SRL_INT_KEY("train.target_period", target_period, std::int64_t),
      SRL_INT_KEY("train.utd", utd, std::int64_t),
      SRL_INT_KEY("train.batch_size", batch_size, std::size_t),
      SRL_INT_KEY("replay.capacity", buffer_capacity, std::size_t),
      SRL_INT_KEY("replay.warmup", warmup, std::int64_t),
      KeyHandler{"replay.offline_dataset", [](const ExperimentConfig& c) { return c.offline_dataset; },
                 [](ExperimentConfig& c, const std::string& v) { c.offline_dataset = v; }},
      SRL_DOUBLE_KEY("epsilon.start", epsilon_start),
      SRL_DOUBLE_KEY("epsilon.end", epsilon_end),
      SRL_INT_KEY("epsilon.decay_steps", epsilon_decay_steps, std::int64_t),
      KeyHandler{"net.hidden", [](const ExperimentConfig& c) { return format_widths(c.hidden); },
                 [](ExperimentConfig& c, const std::string& v) { c.hidden = parse_widths("net.hidden", v); }},
      KeyHandler{"net.actor_hidden", [](const ExperimentConfig& c) { return format_widths(c.actor_hidden); },
                 [](ExperimentConfig& c, const std::string& v) {
                   c.actor_hidden = parse_widths("net.actor_hidden", v);
                 }},
      SRL_DOUBLE_KEY("adam.lr", adam.learning_rate),
      SRL_DOUBLE_KEY("adam.epsilon", adam.epsilon),
      SRL_DOUBLE_KEY("adam.beta1", adam.beta1),
      SRL_DOUBLE_KEY("adam.beta2", adam.beta2),
      SRL_DOUBLE_KEY("adam.actor_lr", actor_learning_rate),
      SRL_DOUBLE_KEY("sac.tau", tau),
      SRL_DOUBLE_KEY("sac.alpha", alpha),
      SRL_INT_KEY("sac.pruning_period", pruning_period, std::int64_t),
      SRL_DOUBLE_KEY("poly.final_sparsity", poly_final_sparsity),
      SRL_DOUBLE_KEY("poly.exponent", poly_exponent),
      SRL_DOUBLE_KEY("poly.start_fraction", poly_start_fraction),
      SRL_DOUBLE_KEY("poly.end_fraction", poly_end_fraction),
      SRL_INT_KEY("poly.period", poly_period, std::int64_t),
      SRL_DOUBLE_KEY("eaude.u_max", u_max),
      SRL_DOUBLE_KEY("eaude.s_max", s_max),
      SRL_INT_KEY("eaude.population", population_size, std::size_t),
      SRL_INT_KEY("eaude.tournament", tournament_size, std::size_t),
      SRL_INT_KEY("eval.period", eval_period, std::int64_t),
      SRL_INT_KEY("eval.episodes", eval_episodes, std::size_t),
      SRL_INT_KEY("log.period", log_period, std::int64_t),
      KeyHandler{"log.wallclock", [](const ExperimentConfig& c) { return std::string(c.log_wallclock ? "true" : "false"); },
                 [](ExperimentConfig& c, const std::string& v) { c.log_wallclock = parse_bool("log.wallclock", v); },
                 false},
      SRL_DOUBLE_KEY("norm.random", norm_random),
      SRL_DOUBLE_KEY("norm.reference", norm_reference),
      SRL_INT_KEY("norm.episodes", baseline_episodes, std::size_t),
      KeyHandler{"run.threads", [](const ExperimentConfig& c) { return std::to_string(c.threads); },
                 [](ExperimentConfig& c, const std::string& v) { c.threads = parse_number<int>("run.threads", v); },
                 false},
  };
  return table;
}

#undef SRL_INT_KEY
#undef SRL_DOUBLE_KEY

const KeyHandler& handler(const std::string& key) {
  for (const auto& h : handlers()) {
    if (h.name == key) return h;
  }
  throw ConfigError("unknown config key '" + key + "'");
}

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError("config key '" + key + "': " + message);
}

}  // namespace

std::string to_string(Algorithm a) {
  for (const auto& [id, name] : algorithm_names()) {
    if (id == a) return name;
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  for (const auto& [id, n] : algorithm_names()) {
    if (n == name) return id;
  }
  throw ConfigError("unknown algorithm '" + name + "'");
}

bool is_sac(Algorithm a) {
  return a == Algorithm::sac || a == Algorithm::polyprune_sac || a == Algorithm::eaude_sac;
}
bool is_eaude(Algorithm a) { return a == Algorithm::eaude_dqn || a == Algorithm::eaude_sac; }
bool is_polyprune(Algorithm a) {
  return a == Algorithm::polyprune_dqn || a == Algorithm::distill_dqn ||
         a == Algorithm::polyprune_sac;
}

std::size_t ExperimentConfig::population() const { return is_eaude(algorithm) ? population_size : 1; }

std::int64_t ExperimentConfig::prune_period() const {
  if (poly_period > 0) return poly_period;
  return is_sac(algorithm) ? pruning_period : target_period;
}

pruning::PolyPruneConfig ExperimentConfig::poly() const {
  pruning::PolyPruneConfig p;
  p.final_sparsity = poly_final_sparsity;
  p.exponent = poly_exponent;
  p.t_start = static_cast<std::int64_t>(std::llround(poly_start_fraction * static_cast<double>(total_steps)));
  p.t_end = static_cast<std::int64_t>(std::llround(poly_end_fraction * static_cast<double>(total_steps)));
  p.t_final = total_steps;
  p.pruning_period = prune_period();
  return p;
}

pruning::EauDeConfig ExperimentConfig::eaude() const {
  pruning::EauDeConfig e;
  e.u_max = u_max;
  e.s_max = s_max;
  e.population_size = population_size;
  e.tournament_size = tournament_size;
  e.t_final = total_steps;
  return e;
}

void ExperimentConfig::validate() const {
  require(total_steps > 0, "total_steps", "must be positive");
  require(gradient_period > 0, "train.gradient_period", "must be positive");
  require(target_period > 0, "train.target_period", "must be positive");
  require(utd > 0, "train.utd", "must be positive");
  require(pruning_period > 0, "sac.pruning_period", "must be positive");
  require(poly_period >= 0, "poly.period", "must be non-negative");
  require(log_period > 0, "log.period", "must be positive");
  require(eval_period >= 0, "eval.period", "must be non-negative");
  require(eval_episodes > 0, "eval.episodes", "must be positive");
  require(batch_size > 0, "train.batch_size", "must be positive");
  require(buffer_capacity > 0, "replay.capacity", "must be positive");
  require(warmup >= 0, "replay.warmup", "must be non-negative");
  require(static_cast<std::uint64_t>(warmup) <= buffer_capacity, "replay.warmup",
          "must not exceed replay.capacity");
  require(total_steps >= warmup, "total_steps", "must be at least replay.warmup");
  require(gamma >= 0.0 && gamma <= 1.0, "env.gamma", "must lie in [0, 1]");
  require(epsilon_start >= 0.0 && epsilon_start <= 1.0, "epsilon.start", "must lie in [0, 1]");
  require(epsilon_end >= 0.0 && epsilon_end <= 1.0, "epsilon.end", "must lie in [0, 1]");
  require(epsilon_decay_steps > 0, "epsilon.decay_steps", "must be positive");
  require(!hidden.empty(), "net.hidden", "needs at least one layer");
  for (auto w : hidden) require(w > 0, "net.hidden", "widths must be positive");
  for (auto w : actor_hidden) require(w > 0, "net.actor_hidden", "widths must be positive");
  require(adam.learning_rate > 0.0, "adam.lr", "must be positive");
  require(adam.epsilon > 0.0, "adam.epsilon", "must be positive");
  require(adam.beta1 >= 0.0 && adam.beta1 < 1.0, "adam.beta1", "must lie in [0, 1)");
  require(adam.beta2 >= 0.0 && adam.beta2 < 1.0, "adam.beta2", "must lie in [0, 1)");
  require(threads >= 0, "run.threads", "must be non-negative");
  require(baseline_episodes > 0, "norm.episodes", "must be positive");
  if (!std::isnan(norm_random) || !std::isnan(norm_reference)) {
    require(!std::isnan(norm_random) && !std::isnan(norm_reference), "norm.reference",
            "set both baselines or neither");
    require(norm_random != norm_reference, "norm.reference", "equals norm.random");
  }

  const bool continuous = env == envs::EnvId::pendulum;
  if (is_sac(algorithm)) {
    require(continuous, "env", "SAC variants need a continuous-action environment");
    require(!actor_hidden.empty(), "net.actor_hidden", "needs at least one layer");
    require(tau > 0.0 && tau <= 1.0, "sac.tau", "must lie in (0, 1]");
    require(alpha >= 0.0, "sac.alpha", "must be non-negative");
    require(offline_dataset.empty(), "replay.offline_dataset", "offline mode is value-based only");
  } else {
    require(!continuous, "env", "value-based variants need a discrete-action environment");
  }
  if (is_polyprune(algorithm)) {
    require(poly_final_sparsity >= 0.0 && poly_final_sparsity < 1.0, "poly.final_sparsity",
            "must lie in [0, 1)");
    require(poly_exponent > 0.0, "poly.exponent", "must be positive");
    require(poly_start_fraction >= 0.0 && poly_start_fraction < poly_end_fraction &&
                poly_end_fraction <= 1.0,
            "poly.end_fraction", "need 0 <= start_fraction < end_fraction <= 1");
    try {
      poly().validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("poly: ") + e.what());
    }
  }
  if (is_eaude(algorithm)) {
    require(population_size >= 1, "eaude.population", "must be at least 1");
    require(tournament_size >= 1 && tournament_size <= population_size, "eaude.tournament",
            "must lie in [1, eaude.population]");
    try {
      eaude().validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("eaude: ") + e.what());
    }
  }
}

ExperimentConfig preset(Algorithm algorithm, envs::EnvId env) {
  ExperimentConfig c;
  c.algorithm = algorithm;
  c.env = env;
  switch (env) {
    case envs::EnvId::chain:
    case envs::EnvId::gridworld:
      break;
    case envs::EnvId::cartpole:
      c.total_steps = 100000;
      c.target_period = 1000;
      c.buffer_capacity = 50000;
      c.warmup = 1000;
      c.epsilon_decay_steps = 10000;
      c.hidden = {64, 64};
      c.eval_period = 5000;
      break;
    case envs::EnvId::pendulum:
      c.total_steps = 50000;
      c.buffer_capacity = 50000;
      c.warmup = 1000;
      c.batch_size = 64;
      c.hidden = {32, 32};
      c.actor_hidden = {32, 32};
      c.eval_period = 5000;
      break;
  }
  return c;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& h : handlers()) keys.push_back(h.name);
  return keys;
}

void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  handler(key).set(cfg, value);
}

std::string get_key(const ExperimentConfig& cfg, const std::string& key) {
  return handler(key).get(cfg);
}

ExperimentConfig parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::map<std::string, std::size_t> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    handler(key);  // rejects unknown keys
    if (seen.contains(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    seen[key] = line_no;
    pairs.emplace_back(std::move(key), std::move(value));
  }
  Algorithm algorithm = Algorithm::dqn;
  envs::EnvId env = envs::EnvId::chain;
  for (const auto& [k, v] : pairs) {
    if (k == "algorithm") algorithm = algorithm_from_string(v);
    if (k == "env") env = envs::env_id_from_string(v);
  }
  ExperimentConfig cfg = preset(algorithm, env);
  for (const auto& [k, v] : pairs) set_key(cfg, k, v);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& h : handlers()) out += h.name + " = " + h.get(cfg) + "\n";
  return out;
}

bool ExperimentConfig::operator==(const ExperimentConfig& other) const {
  return to_text(*this) == to_text(other);
}

std::uint64_t config_digest(const ExperimentConfig& cfg) {
  std::string text;
  for (const auto& h : handlers()) {
    if (h.digest) text += h.name + "=" + h.get(cfg) + "\n";
  }
  return fnv1a64(text);
}

}  // namespace sparserl::harness
