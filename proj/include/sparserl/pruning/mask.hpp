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
#include <vector>

#include "sparserl/nncore/network.hpp"

namespace sparserl::pruning {

// Binary mask over the weight matrices of one network (biases carry no mask).
// layers[l][i] is 1 when weight i of layer l is kept, 0 when pruned.
struct Mask {
  std::vector<std::vector<std::uint8_t>> layers;

  static Mask ones_like(const nn::NetworkParams& params);
  static Mask zeros_like(const nn::NetworkParams& params);

  std::size_t entry_count() const;
  std::size_t zero_count() const;
  bool operator==(const Mask&) const = default;
};

// Throws ConfigError when the mask does not mirror the weight shapes.
void check_shape(const nn::NetworkParams& params, const Mask& mask);

}  // namespace sparserl::pruning
