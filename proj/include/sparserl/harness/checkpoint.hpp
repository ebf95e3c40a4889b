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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "sparserl/harness/config.hpp"
#include "sparserl/harness/trainer.hpp"

namespace sparserl::harness {

struct Checkpoint {
  ExperimentConfig config;
  std::uint64_t digest = 0;
  TrainerState state;
};

// Layout: "SRLCKPT1", u32 version, u64 config digest, config text, state.
std::string encode_checkpoint(const ExperimentConfig& config, const TrainerState& state);
// Throws ParseError on any malformed or truncated input; nothing is returned
// unless the whole file decodes.
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const ExperimentConfig& config,
                     const TrainerState& state);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Rebuilds a trainer from a checkpoint. Throws ConfigError when the digest of
// `config` differs from the one recorded in the checkpoint.
Trainer resume_trainer(const ExperimentConfig& config, Checkpoint checkpoint);

}  // namespace sparserl::harness
