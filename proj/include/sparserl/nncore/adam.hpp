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

#include "sparserl/nncore/network.hpp"

namespace sparserl::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double epsilon = 1.5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;

  bool operator==(const AdamConfig&) const = default;
};

struct AdamState {
  AdamConfig config;
  NetworkParams first_moment;
  NetworkParams second_moment;
  std::uint64_t step_count = 0;

  static AdamState fresh(const NetworkParams& shape, AdamConfig config);
  bool operator==(const AdamState&) const = default;
};

// One bias-corrected Adam update, in place. No masking happens here: positions
// whose gradient and moments are zero do not move.
void adam_step(NetworkParams& params, const Gradient& grad, AdamState& state);

// Zeroes both moments and the step count; hyperparameters are kept.
void reset_optimizer(AdamState& state);

}  // namespace sparserl::nn
