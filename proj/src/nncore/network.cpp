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

#include "sparserl/nncore/network.hpp"

#include <cmath>

#include "sparserl/common/errors.hpp"
#include "sparserl/pruning/mask.hpp"

namespace sparserl::nn {

namespace {

bool all_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

// Effective weights transposed to (input_width x output_width) so the forward
// inner loop is a contiguous axpy.
std::vector<double> masked_transpose(const std::vector<double>& w, const std::vector<std::uint8_t>& m,
                                     std::size_t out, std::size_t in) {
  std::vector<double> t(in * out);
  for (std::size_t o = 0; o < out; ++o) {
    for (std::size_t i = 0; i < in; ++i) {
      t[i * out + o] = m[o * in + i] ? w[o * in + i] : 0.0;
    }
  }
  return t;
}

void activate(Activation a, std::span<double> values) {
  switch (a) {
    case Activation::relu:
      for (double& v : values) v = v > 0.0 ? v : 0.0;
      break;
    case Activation::tanh:
      for (double& v : values) v = std::tanh(v);
      break;
    case Activation::identity:
      break;
  }
}

}  // namespace

std::string to_string(Activation a) {
  switch (a) {
    case Activation::relu:
      return "relu";
    case Activation::tanh:
      return "tanh";
    case Activation::identity:
      return "identity";
  }
  return "?";
}

std::vector<LayerSpec> mlp_specs(std::size_t input_width, std::span<const std::size_t> hidden,
                                 std::size_t output_width, Activation hidden_activation) {
  std::vector<LayerSpec> specs;
  std::size_t in = input_width;
  for (std::size_t h : hidden) {
    specs.push_back({in, h, hidden_activation});
    in = h;
  }
  specs.push_back({in, output_width, Activation::identity});
  return specs;
}

NetworkParams NetworkParams::zeros(std::vector<LayerSpec> layers) {
  NetworkParams p;
  for (const auto& s : layers) {
    p.weights.emplace_back(s.input_width * s.output_width, 0.0);
    p.biases.emplace_back(s.output_width, 0.0);
  }
  p.layers = std::move(layers);
  return p;
}

std::size_t NetworkParams::weight_count() const {
  std::size_t n = 0;
  for (const auto& w : weights) n += w.size();
  return n;
}

bool NetworkParams::all_finite() const {
  for (const auto& w : weights) {
    if (!nn::all_finite(w)) return false;
  }
  for (const auto& b : biases) {
    if (!nn::all_finite(b)) return false;
  }
  return true;
}

void validate_specs(std::span<const LayerSpec> layers) {
  if (layers.empty()) throw ConfigError("network needs at least one layer");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].input_width == 0 || layers[l].output_width == 0) {
      throw ConfigError("layer " + std::to_string(l) + " has zero width");
    }
    if (l > 0 && layers[l].input_width != layers[l - 1].output_width) {
      throw ConfigError("layer " + std::to_string(l) + " input width " +
                        std::to_string(layers[l].input_width) + " does not match previous output " +
                        std::to_string(layers[l - 1].output_width));
    }
  }
}

NetworkParams init_network(std::vector<LayerSpec> layers, RngStream& rng) {
  validate_specs(layers);
  NetworkParams p = NetworkParams::zeros(std::move(layers));
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const auto& s = p.layers[l];
    const double bound = std::sqrt(6.0 / static_cast<double>(s.input_width + s.output_width));
    for (double& w : p.weights[l]) w = rng.uniform(-bound, bound);
  }
  return p;
}

ForwardCache forward_batch(const NetworkParams& params, const pruning::Mask& mask,
                           std::span<const double> inputs, std::size_t batch) {
  pruning::check_shape(params, mask);
  if (inputs.size() != batch * params.input_width()) {
    throw ConfigError("forward: input has " + std::to_string(inputs.size()) + " values, expected " +
                      std::to_string(batch * params.input_width()));
  }
  ForwardCache cache;
  cache.batch = batch;
  cache.activations.reserve(params.layers.size() + 1);
  cache.activations.emplace_back(inputs.begin(), inputs.end());
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& s = params.layers[l];
    const std::size_t in = s.input_width;
    const std::size_t out = s.output_width;
    const auto wt = masked_transpose(params.weights[l], mask.layers[l], out, in);
    const auto& bias = params.biases[l];
    const auto& x = cache.activations[l];
    std::vector<double> y(batch * out);
    for (std::size_t b = 0; b < batch; ++b) {
      double* yb = y.data() + b * out;
      for (std::size_t o = 0; o < out; ++o) yb[o] = bias[o];
      const double* xb = x.data() + b * in;
      for (std::size_t i = 0; i < in; ++i) {
        const double xi = xb[i];
        if (xi == 0.0) continue;
        const double* wrow = wt.data() + i * out;
        for (std::size_t o = 0; o < out; ++o) yb[o] += xi * wrow[o];
      }
    }
    activate(s.activation, y);
    cache.activations.push_back(std::move(y));
  }
  return cache;
}

std::vector<double> forward(const NetworkParams& params, const pruning::Mask& mask,
                            std::span<const double> input) {
  auto cache = forward_batch(params, mask, input, 1);
  return std::move(cache.activations.back());
}

Gradient backprop(const NetworkParams& params, const pruning::Mask& mask, const ForwardCache& cache,
                  std::span<const double> output_grad, std::vector<double>* input_grad) {
  pruning::check_shape(params, mask);
  const std::size_t batch = cache.batch;
  if (output_grad.size() != batch * params.output_width()) {
    throw ConfigError("backprop: output gradient has wrong size");
  }
  Gradient grad = params.zeros_like();
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  for (std::size_t l = params.layers.size(); l-- > 0;) {
    const auto& s = params.layers[l];
    const std::size_t in = s.input_width;
    const std::size_t out = s.output_width;
    const auto& y = cache.activations[l + 1];
    const auto& x = cache.activations[l];
    switch (s.activation) {
      case Activation::relu:
        for (std::size_t k = 0; k < delta.size(); ++k) {
          if (!(y[k] > 0.0)) delta[k] = 0.0;
        }
        break;
      case Activation::tanh:
        for (std::size_t k = 0; k < delta.size(); ++k) delta[k] *= 1.0 - y[k] * y[k];
        break;
      case Activation::identity:
        break;
    }
    if (!all_finite(delta)) {
      throw NumericError("non-finite gradient at layer " + std::to_string(l), static_cast<int>(l));
    }

    auto& gw = grad.weights[l];
    auto& gb = grad.biases[l];
    for (std::size_t b = 0; b < batch; ++b) {
      const double* db = delta.data() + b * out;
      const double* xb = x.data() + b * in;
      for (std::size_t o = 0; o < out; ++o) {
        const double d = db[o];
        gb[o] += d;
        if (d == 0.0) continue;
        double* row = gw.data() + o * in;
        for (std::size_t i = 0; i < in; ++i) row[i] += d * xb[i];
      }
    }
    const auto& m = mask.layers[l];
    for (std::size_t k = 0; k < gw.size(); ++k) {
      if (!m[k]) gw[k] = 0.0;
    }

    if (l == 0 && input_grad == nullptr) break;
    const auto& w = params.weights[l];
    std::vector<double> dx(batch * in, 0.0);
    for (std::size_t b = 0; b < batch; ++b) {
      const double* db = delta.data() + b * out;
      double* dxb = dx.data() + b * in;
      for (std::size_t o = 0; o < out; ++o) {
        const double d = db[o];
        if (d == 0.0) continue;
        const double* row = w.data() + o * in;
        const std::uint8_t* mrow = m.data() + o * in;
        for (std::size_t i = 0; i < in; ++i) dxb[i] += mrow[i] ? d * row[i] : 0.0;
      }
    }
    delta = std::move(dx);
  }
  if (input_grad != nullptr) *input_grad = std::move(delta);
  return grad;
}

namespace {

void check_td_inputs(const NetworkParams& params, std::span<const double> inputs,
                     std::span<const std::size_t> actions, std::span<const double> targets) {
  const std::size_t batch = actions.size();
  if (batch == 0) throw ArgumentError("td loss: empty batch");
  if (targets.size() != batch || inputs.size() != batch * params.input_width()) {
    throw ConfigError("td loss: batch arrays disagree in length");
  }
  for (std::size_t b = 0; b < batch; ++b) {
    if (actions[b] >= params.output_width()) throw ArgumentError("td loss: action index out of range");
    if (!std::isfinite(targets[b])) throw NumericError("td loss: non-finite target");
  }
}

}  // namespace

LossAndGradient td_backward(const NetworkParams& params, const pruning::Mask& mask,
                            std::span<const double> inputs, std::span<const std::size_t> actions,
                            std::span<const double> targets) {
  check_td_inputs(params, inputs, actions, targets);
  const std::size_t batch = actions.size();
  const auto cache = forward_batch(params, mask, inputs, batch);
  for (std::size_t l = 1; l < cache.activations.size(); ++l) {
    if (!all_finite(cache.activations[l])) {
      throw NumericError("non-finite activation at layer " + std::to_string(l - 1),
                         static_cast<int>(l - 1));
    }
  }
  const std::size_t width = params.output_width();
  const auto q = cache.output();
  std::vector<double> dq(batch * width, 0.0);
  LossAndGradient out;
  for (std::size_t b = 0; b < batch; ++b) {
    const double residual = q[b * width + actions[b]] - targets[b];
    out.loss += residual * residual;
    dq[b * width + actions[b]] = 2.0 * residual;
  }
  out.gradient = backprop(params, mask, cache, dq);
  return out;
}

double td_loss(const NetworkParams& params, const pruning::Mask& mask,
               std::span<const double> inputs, std::span<const std::size_t> actions,
               std::span<const double> targets) {
  check_td_inputs(params, inputs, actions, targets);
  const std::size_t batch = actions.size();
  const auto cache = forward_batch(params, mask, inputs, batch);
  const std::size_t width = params.output_width();
  const auto q = cache.output();
  double loss = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    const double residual = q[b * width + actions[b]] - targets[b];
    loss += residual * residual;
  }
  return loss;
}

}  // namespace sparserl::nn
