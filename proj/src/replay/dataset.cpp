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

#include "sparserl/replay/dataset.hpp"

#include <cmath>

#include "sparserl/common/errors.hpp"

namespace sparserl::replay {

namespace {

constexpr std::string_view kMagic = "SRLDATA1";
constexpr std::uint32_t kVersion = 1;

}  // namespace

void check_transition(const envs::Transition& t, const envs::EnvSpec& spec) {
  if (t.state.size() != spec.observation_width || t.next_state.size() != spec.observation_width) {
    throw ArgumentError("transition observation width disagrees with environment");
  }
  if (spec.discrete()) {
    const auto* a = std::get_if<std::size_t>(&t.action);
    if (a == nullptr || *a >= spec.action_count()) {
      throw ArgumentError("transition action invalid for a discrete space");
    }
  } else {
    const auto* a = std::get_if<std::vector<double>>(&t.action);
    if (a == nullptr || a->size() != spec.continuous().dimension) {
      throw ArgumentError("transition action invalid for a continuous space");
    }
  }
  if (!std::isfinite(t.reward)) throw ArgumentError("transition reward is not finite");
}

void OfflineDataset::validate() const {
  if (transitions.empty()) throw ArgumentError("offline dataset has no transitions");
  for (const auto& t : transitions) check_transition(t, source_env);
}

void write_transition(BinaryWriter& out, const envs::Transition& t) {
  for (double v : t.state) out.f64(v);
  if (const auto* a = std::get_if<std::size_t>(&t.action)) {
    out.u64(*a);
  } else {
    for (double v : std::get<std::vector<double>>(t.action)) out.f64(v);
  }
  out.f64(t.reward);
  for (double v : t.next_state) out.f64(v);
  out.u8(t.done ? 1 : 0);
}

envs::Transition read_transition(BinaryReader& in, const envs::EnvSpec& spec) {
  envs::Transition t;
  t.state.resize(spec.observation_width);
  for (double& v : t.state) v = in.f64();
  if (spec.discrete()) {
    t.action = static_cast<std::size_t>(in.u64());
  } else {
    std::vector<double> a(spec.continuous().dimension);
    for (double& v : a) v = in.f64();
    t.action = std::move(a);
  }
  t.reward = in.f64();
  t.next_state.resize(spec.observation_width);
  for (double& v : t.next_state) v = in.f64();
  const auto at = in.offset();
  const auto done = in.u8();
  if (done > 1) throw ParseError("done flag must be 0 or 1", at);
  t.done = done == 1;
  return t;
}

void write_env_spec(BinaryWriter& out, const envs::EnvSpec& spec) {
  out.u32(static_cast<std::uint32_t>(spec.id));
  out.u32(static_cast<std::uint32_t>(spec.observation_width));
  if (spec.discrete()) {
    out.u8(0);
    out.u32(static_cast<std::uint32_t>(spec.action_count()));
    out.f64(0.0);
    out.f64(0.0);
  } else {
    const auto c = spec.continuous();
    out.u8(1);
    out.u32(static_cast<std::uint32_t>(c.dimension));
    out.f64(c.low);
    out.f64(c.high);
  }
  out.u64(spec.horizon);
  out.f64(spec.discount);
}

envs::EnvSpec read_env_spec(BinaryReader& in) {
  envs::EnvSpec spec;
  auto at = in.offset();
  const auto id = in.u32();
  if (id > static_cast<std::uint32_t>(envs::EnvId::pendulum)) throw ParseError("unknown env id", at);
  spec.id = static_cast<envs::EnvId>(id);
  spec.observation_width = in.u32();
  at = in.offset();
  const auto kind = in.u8();
  const auto width = in.u32();
  const double low = in.f64();
  const double high = in.f64();
  if (kind == 0) {
    spec.action_space = envs::DiscreteActions{width};
  } else if (kind == 1) {
    spec.action_space = envs::ContinuousActions{width, low, high};
  } else {
    throw ParseError("unknown action space kind", at);
  }
  spec.horizon = in.u64();
  spec.discount = in.f64();
  return spec;
}

std::string encode_dataset(const OfflineDataset& dataset) {
  dataset.validate();
  BinaryWriter out;
  out.raw(kMagic);
  out.u32(kVersion);
  write_env_spec(out, dataset.source_env);
  out.u64(dataset.transitions.size());
  for (const auto& t : dataset.transitions) write_transition(out, t);
  return out.take();
}

OfflineDataset decode_dataset(std::string_view bytes) {
  BinaryReader in(bytes);
  if (in.raw(std::min(bytes.size(), kMagic.size())) != kMagic) {
    throw ParseError("not a dataset file (bad magic)", 0);
  }
  const auto version_at = in.offset();
  if (in.u32() != kVersion) throw ParseError("unsupported dataset version", version_at);
  OfflineDataset dataset;
  dataset.source_env = read_env_spec(in);
  const auto count_at = in.offset();
  const auto count = in.u64();
  if (count == 0) throw ParseError("dataset declares zero records", count_at);
  dataset.transitions.reserve(std::min<std::uint64_t>(count, 1u << 20));
  for (std::uint64_t i = 0; i < count; ++i) {
    try {
      dataset.transitions.push_back(read_transition(in, dataset.source_env));
    } catch (const ParseError& e) {
      throw ParseError("truncated or malformed record", e.offset(), static_cast<std::size_t>(i));
    }
  }
  if (!in.at_end()) throw ParseError("trailing bytes after last record", in.offset());
  try {
    dataset.validate();
  } catch (const ArgumentError& e) {
    throw ParseError(e.what(), in.offset());
  }
  return dataset;
}

void save_dataset(const OfflineDataset& dataset, const std::filesystem::path& path) {
  write_file(path, encode_dataset(dataset));
}

OfflineDataset load_dataset(const std::filesystem::path& path) {
  return decode_dataset(read_file(path));
}

}  // namespace sparserl::replay
