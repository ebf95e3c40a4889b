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

#include "sparserl/harness/checkpoint.hpp"

#include <sstream>

#include "sparserl/common/binary_io.hpp"
#include "sparserl/common/errors.hpp"
#include "sparserl/replay/dataset.hpp"

namespace sparserl::harness {

namespace {

constexpr std::string_view kMagic = "SRLCKPT1";
constexpr std::uint32_t kVersion = 1;

void put_params(BinaryWriter& out, const nn::NetworkParams& p) {
  out.u64(p.layers.size());
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    out.u64(p.layers[l].input_width);
    out.u64(p.layers[l].output_width);
    out.u8(static_cast<std::uint8_t>(p.layers[l].activation));
    out.f64s(p.weights[l]);
    out.f64s(p.biases[l]);
  }
}

nn::NetworkParams get_params(BinaryReader& in) {
  nn::NetworkParams p;
  const auto n = in.length(17);
  for (std::uint64_t l = 0; l < n; ++l) {
    const std::uint64_t offset = in.offset();
    nn::LayerSpec spec;
    spec.input_width = in.u64();
    spec.output_width = in.u64();
    const auto act = in.u8();
    if (act > static_cast<std::uint8_t>(nn::Activation::identity)) {
      throw ParseError("unknown activation code", offset);
    }
    spec.activation = static_cast<nn::Activation>(act);
    auto w = in.f64s();
    auto b = in.f64s();
    if (w.size() != spec.input_width * spec.output_width || b.size() != spec.output_width) {
      throw ParseError("layer " + std::to_string(l) + " size disagrees with its shape", offset);
    }
    p.layers.push_back(spec);
    p.weights.push_back(std::move(w));
    p.biases.push_back(std::move(b));
  }
  return p;
}

void put_mask(BinaryWriter& out, const pruning::Mask& m) {
  out.u64(m.layers.size());
  for (const auto& layer : m.layers) out.u8s(layer);
}

pruning::Mask get_mask(BinaryReader& in) {
  pruning::Mask m;
  const auto n = in.length(8);
  for (std::uint64_t l = 0; l < n; ++l) m.layers.push_back(in.u8s());
  return m;
}

void put_adam(BinaryWriter& out, const nn::AdamState& a) {
  out.f64(a.config.learning_rate);
  out.f64(a.config.epsilon);
  out.f64(a.config.beta1);
  out.f64(a.config.beta2);
  put_params(out, a.first_moment);
  put_params(out, a.second_moment);
  out.u64(a.step_count);
}

nn::AdamState get_adam(BinaryReader& in) {
  nn::AdamState a;
  a.config.learning_rate = in.f64();
  a.config.epsilon = in.f64();
  a.config.beta1 = in.f64();
  a.config.beta2 = in.f64();
  a.first_moment = get_params(in);
  a.second_moment = get_params(in);
  a.step_count = in.u64();
  return a;
}

void put_member(BinaryWriter& out, const agents::Member& m) {
  put_params(out, m.params);
  put_mask(out, m.mask);
  put_adam(out, m.optimizer);
  out.f64(m.cumulated_loss);
  out.f64(m.sparsity);
  out.i64(m.lineage_id);
}

agents::Member get_member(BinaryReader& in) {
  const std::uint64_t offset = in.offset();
  agents::Member m;
  m.params = get_params(in);
  m.mask = get_mask(in);
  m.optimizer = get_adam(in);
  m.cumulated_loss = in.f64();
  m.sparsity = in.f64();
  m.lineage_id = in.i64();
  if (m.mask.layers.size() != m.params.layers.size() ||
      m.optimizer.first_moment.layers != m.params.layers ||
      m.optimizer.second_moment.layers != m.params.layers) {
    throw ParseError("member parts disagree in shape", offset);
  }
  for (std::size_t l = 0; l < m.mask.layers.size(); ++l) {
    if (m.mask.layers[l].size() != m.params.weights[l].size()) {
      throw ParseError("member mask disagrees with its weights", offset);
    }
  }
  return m;
}

void put_members(BinaryWriter& out, const std::vector<agents::Member>& members) {
  out.u64(members.size());
  for (const auto& m : members) put_member(out, m);
}

std::vector<agents::Member> get_members(BinaryReader& in) {
  std::vector<agents::Member> members;
  const auto n = in.length(1);
  for (std::uint64_t k = 0; k < n; ++k) members.push_back(get_member(in));
  return members;
}

void put_rng(BinaryWriter& out, const RngStream& rng) {
  out.u64(rng.seed());
  out.str(rng.label());
  out.str(rng.save_state());
}

RngStream get_rng(BinaryReader& in) {
  const std::uint64_t offset = in.offset();
  const auto seed = in.u64();
  auto label = in.str();
  const auto state = in.str();
  RngStream rng(seed, std::move(label));
  try {
    rng.restore_state(state);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad rng state: ") + e.what(), offset);
  }
  return rng;
}

void put_indices(BinaryWriter& out, const std::vector<std::size_t>& v) {
  out.u64(v.size());
  for (auto x : v) out.u64(x);
}

std::vector<std::size_t> get_indices(BinaryReader& in) {
  std::vector<std::size_t> v(in.length(8));
  for (auto& x : v) x = static_cast<std::size_t>(in.u64());
  return v;
}

void put_log(BinaryWriter& out, const RunLog& log) {
  out.u64(log.population);
  out.u8(log.twin ? 1 : 0);
  out.u64(log.records.size());
  for (const auto& r : log.records) {
    out.i64(r.step);
    out.f64(r.wallclock_s);
    out.f64(r.episode_return);
    out.f64(r.eval_return);
    put_indices(out, r.champion);
    put_indices(out, r.behavior);
    out.f64s(r.sparsity);
    out.f64s(r.loss);
  }
}

RunLog get_log(BinaryReader& in) {
  RunLog log;
  log.population = static_cast<std::size_t>(in.u64());
  log.twin = in.u8() != 0;
  const auto n = in.length(8);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t offset = in.offset();
    RunRecord r;
    r.step = in.i64();
    r.wallclock_s = in.f64();
    r.episode_return = in.f64();
    r.eval_return = in.f64();
    r.champion = get_indices(in);
    r.behavior = get_indices(in);
    r.sparsity = in.f64s();
    r.loss = in.f64s();
    try {
      log.append(std::move(r));
    } catch (const std::logic_error& e) {
      throw ParseError(std::string("bad log record: ") + e.what(), offset, i);
    }
  }
  return log;
}

std::unique_ptr<envs::Environment> environment_for(const ExperimentConfig& cfg) {
  const std::size_t horizon = cfg.horizon ? cfg.horizon : envs::default_horizon(cfg.env);
  return envs::make_environment(cfg.env, horizon, cfg.gamma);
}

}  // namespace

std::string encode_checkpoint(const ExperimentConfig& config, const TrainerState& s) {
  BinaryWriter out;
  out.raw(kMagic);
  out.u32(kVersion);
  out.u64(config_digest(config));
  out.str(to_text(config));

  out.i64(s.step);
  out.u64(s.gradient_steps);

  put_members(out, s.population.members);
  put_params(out, s.population.target_params);
  put_mask(out, s.population.target_mask);
  out.u64(s.population.champion);
  out.i64(s.population.next_lineage_id);

  for (const auto& set : s.sac.twin.critics) {
    put_members(out, set.members);
    out.u64(set.targets.size());
    for (const auto& t : set.targets) put_params(out, t);
    out.u64(set.champion);
  }
  out.f64(s.sac.twin.tau);
  out.f64(s.sac.twin.alpha);
  out.i64(s.sac.twin.pruning_period);
  out.i64(s.sac.twin.next_lineage_id);
  put_params(out, s.sac.policy.network);
  put_mask(out, s.sac.policy.mask);
  put_adam(out, s.sac.policy.optimizer);
  out.u64(s.sac.policy.bounds.dimension);
  out.f64(s.sac.policy.bounds.low);
  out.f64(s.sac.policy.bounds.high);

  out.u64(s.buffer.capacity());
  out.u64(s.buffer.insert_count());
  out.u64(s.buffer.head());
  out.u64(s.buffer.slots().size());
  for (const auto& t : s.buffer.slots()) replay::write_transition(out, t);

  out.f64s(s.observation);
  out.f64(s.episode_accumulator);
  out.u64(s.episode_length);
  out.u64(s.episodes);
  out.f64(s.last_episode_return);
  put_indices(out, s.behavior);
  for (const auto* rng : {&s.env_rng, &s.act_rng, &s.sample_rng, &s.select_rng, &s.policy_rng,
                          &s.eval_rng}) {
    put_rng(out, *rng);
  }
  out.f64(s.wallclock_offset);
  put_log(out, s.log);
  return out.take();
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  BinaryReader in(bytes);
  if (in.raw(kMagic.size()) != kMagic) throw ParseError("not a checkpoint file", 0);
  const auto version = in.u32();
  if (version != kVersion) {
    throw ParseError("unsupported checkpoint version " + std::to_string(version), in.offset() - 4);
  }
  Checkpoint c;
  c.digest = in.u64();
  const std::uint64_t config_offset = in.offset();
  try {
    c.config = parse_config(in.str());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("embedded config is invalid: ") + e.what(), config_offset);
  }
  if (config_digest(c.config) != c.digest) {
    throw ParseError("embedded config does not match the recorded digest", config_offset);
  }
  const auto env = environment_for(c.config);

  TrainerState s;
  s.step = in.i64();
  s.gradient_steps = in.u64();

  s.population.members = get_members(in);
  s.population.target_params = get_params(in);
  s.population.target_mask = get_mask(in);
  s.population.champion = static_cast<std::size_t>(in.u64());
  s.population.next_lineage_id = in.i64();

  for (auto& set : s.sac.twin.critics) {
    set.members = get_members(in);
    const auto n = in.length(8);
    for (std::uint64_t k = 0; k < n; ++k) set.targets.push_back(get_params(in));
    set.champion = static_cast<std::size_t>(in.u64());
  }
  s.sac.twin.tau = in.f64();
  s.sac.twin.alpha = in.f64();
  s.sac.twin.pruning_period = in.i64();
  s.sac.twin.next_lineage_id = in.i64();
  s.sac.policy.network = get_params(in);
  s.sac.policy.mask = get_mask(in);
  s.sac.policy.optimizer = get_adam(in);
  s.sac.policy.bounds.dimension = static_cast<std::size_t>(in.u64());
  s.sac.policy.bounds.low = in.f64();
  s.sac.policy.bounds.high = in.f64();

  const std::uint64_t buffer_offset = in.offset();
  const auto capacity = in.u64();
  const auto inserts = in.u64();
  const auto head = in.u64();
  const auto count = in.length(1);
  std::vector<envs::Transition> slots;
  slots.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    try {
      slots.push_back(replay::read_transition(in, env->spec()));
    } catch (const ParseError& e) {
      throw ParseError("truncated replay record", e.offset(), i);
    }
  }
  try {
    s.buffer = replay::ReplayBuffer::restore(capacity, inserts, head, std::move(slots));
  } catch (const std::exception& e) {
    throw ParseError(std::string("inconsistent replay buffer: ") + e.what(), buffer_offset);
  }

  s.observation = in.f64s();
  s.episode_accumulator = in.f64();
  s.episode_length = in.u64();
  s.episodes = in.u64();
  s.last_episode_return = in.f64();
  s.behavior = get_indices(in);
  for (auto* rng : {&s.env_rng, &s.act_rng, &s.sample_rng, &s.select_rng, &s.policy_rng,
                    &s.eval_rng}) {
    *rng = get_rng(in);
  }
  s.wallclock_offset = in.f64();
  s.log = get_log(in);
  if (!in.at_end()) throw ParseError("trailing bytes after checkpoint", in.offset());
  c.state = std::move(s);
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const ExperimentConfig& config,
                     const TrainerState& state) {
  write_file(path, encode_checkpoint(config, state));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_file(path));
}

Trainer resume_trainer(const ExperimentConfig& config, Checkpoint checkpoint) {
  if (config_digest(config) != checkpoint.digest) {
    throw ConfigError("config digest does not match the checkpoint; refusing to resume");
  }
  return Trainer(config, std::move(checkpoint.state));
}

}  // namespace sparserl::harness
