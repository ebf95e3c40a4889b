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

#include <filesystem>
#include <vector>

#include "sparserl/common/binary_io.hpp"
#include "sparserl/envs/environment.hpp"

namespace sparserl::replay {

struct OfflineDataset {
  envs::EnvSpec source_env;
  std::vector<envs::Transition> transitions;

  // Throws ArgumentError when empty or when a record does not fit source_env.
  void validate() const;
};

// Fixed-width record codec shared by dataset files and checkpoints:
// state, action (u64 index or f64 x dimension), reward, next_state, done (u8).
void write_transition(BinaryWriter& out, const envs::Transition& t);
envs::Transition read_transition(BinaryReader& in, const envs::EnvSpec& spec);
void check_transition(const envs::Transition& t, const envs::EnvSpec& spec);

void write_env_spec(BinaryWriter& out, const envs::EnvSpec& spec);
envs::EnvSpec read_env_spec(BinaryReader& in);

// File layout: "SRLDATA1", u32 version, env spec, u64 count, then `count`
// little-endian records.
std::string encode_dataset(const OfflineDataset& dataset);
OfflineDataset decode_dataset(std::string_view bytes);
void save_dataset(const OfflineDataset& dataset, const std::filesystem::path& path);
OfflineDataset load_dataset(const std::filesystem::path& path);

}  // namespace sparserl::replay
