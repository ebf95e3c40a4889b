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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sparserl/common/rng.hpp"

namespace sparserl::pruning {
struct Mask;
}

namespace sparserl::nn {

enum class Activation { relu, tanh, identity };

std::string to_string(Activation a);

struct LayerSpec {
  std::size_t input_width = 0;
  std::size_t output_width = 0;
  Activation activation = Activation::identity;

  bool operator==(const LayerSpec&) const = default;
};

// Builds a chained MLP spec: hidden layers use `hidden`, the last is identity.
std::vector<LayerSpec> mlp_specs(std::size_t input_width, std::span<const std::size_t> hidden,
                                 std::size_t output_width, Activation activation = Activation::relu);

// Dense MLP parameters. Layer l's weight matrix is stored row-major with shape
// (output_width x input_width). Gradients and Adam moments reuse this type.
struct NetworkParams {
  std::vector<LayerSpec> layers;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  static NetworkParams zeros(std::vector<LayerSpec> layers);
  NetworkParams zeros_like() const { return zeros(layers); }

  std::size_t input_width() const { return layers.front().input_width; }
  std::size_t output_width() const { return layers.back().output_width; }
  std::size_t weight_count() const;
  bool all_finite() const;

  bool operator==(const NetworkParams&) const = default;
};

using Gradient = NetworkParams;

// Throws ConfigError when specs are empty, have zero widths, or do not chain.
void validate_specs(std::span<const LayerSpec> layers);

// Fan-in/fan-out scaled uniform weights, zero biases.
NetworkParams init_network(std::vector<LayerSpec> layers, RngStream& rng);

// Per-layer outputs of a batched forward pass. activations[0] is the input
// batch and activations[l + 1] the post-activation output of layer l, each
// stored row-major as (batch x width).
struct ForwardCache {
  std::size_t batch = 0;
  std::vector<std::vector<double>> activations;

  std::span<const double> output() const { return activations.back(); }
};

// Forward pass with effective weights w * mask. Biases are never masked.
std::vector<double> forward(const NetworkParams& params, const pruning::Mask& mask,
                            std::span<const double> input);

ForwardCache forward_batch(const NetworkParams& params, const pruning::Mask& mask,
                           std::span<const double> inputs, std::size_t batch);

// Vector-Jacobian product through the cached forward pass. `output_grad` is
// (batch x output_width). Weight gradients at masked positions are exactly 0.
// When `input_grad` is non-null it receives d/d(input), shaped like the input.
Gradient backprop(const NetworkParams& params, const pruning::Mask& mask,
                  const ForwardCache& cache, std::span<const double> output_grad,
                  std::vector<double>* input_grad = nullptr);

struct LossAndGradient {
  double loss = 0.0;
  Gradient gradient;
};

// Gradient of sum_b (target_b - Q(input_b)[action_b])^2 over the batch.
LossAndGradient td_backward(const NetworkParams& params, const pruning::Mask& mask,
                            std::span<const double> inputs, std::span<const std::size_t> actions,
                            std::span<const double> targets);

// The same loss without the gradient.
double td_loss(const NetworkParams& params, const pruning::Mask& mask,
               std::span<const double> inputs, std::span<const std::size_t> actions,
               std::span<const double> targets);

}  // namespace sparserl::nn
