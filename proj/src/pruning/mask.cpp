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

#include "sparserl/pruning/mask.hpp"

#include <algorithm>

#include "sparserl/common/errors.hpp"

namespace sparserl::pruning {

Mask Mask::ones_like(const nn::NetworkParams& params) {
  Mask m;
  for (const auto& w : params.weights) m.layers.emplace_back(w.size(), std::uint8_t{1});
  return m;
}

Mask Mask::zeros_like(const nn::NetworkParams& params) {
  Mask m;
  for (const auto& w : params.weights) m.layers.emplace_back(w.size(), std::uint8_t{0});
  return m;
}

std::size_t Mask::entry_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.size();
  return n;
}

std::size_t Mask::zero_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(std::count(l.begin(), l.end(), 0));
  return n;
}

void check_shape(const nn::NetworkParams& params, const Mask& mask) {
  if (mask.layers.size() != params.weights.size()) {
    throw ConfigError("mask has " + std::to_string(mask.layers.size()) + " layers, network has " +
                      std::to_string(params.weights.size()));
  }
  for (std::size_t l = 0; l < mask.layers.size(); ++l) {
    if (mask.layers[l].size() != params.weights[l].size()) {
      throw ConfigError("mask layer " + std::to_string(l) + " has " +
                        std::to_string(mask.layers[l].size()) + " entries, weights have " +
                        std::to_string(params.weights[l].size()));
    }
  }
}

}  // namespace sparserl::pruning
