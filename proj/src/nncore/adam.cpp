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

#include "sparserl/nncore/adam.hpp"

#include <algorithm>
#include <cmath>

#include "sparserl/common/errors.hpp"

namespace sparserl::nn {

namespace {

void zero_fill(NetworkParams& p) {
  for (auto& w : p.weights) std::fill(w.begin(), w.end(), 0.0);
  for (auto& b : p.biases) std::fill(b.begin(), b.end(), 0.0);
}

void check_same_shape(const NetworkParams& a, const NetworkParams& b) {
  if (a.layers != b.layers) throw ConfigError("adam_step: parameter/gradient shapes disagree");
}

void update(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
            std::vector<double>& v, const AdamConfig& c, double correction1, double correction2) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    m[k] = c.beta1 * m[k] + (1.0 - c.beta1) * g[k];
    v[k] = c.beta2 * v[k] + (1.0 - c.beta2) * g[k] * g[k];
    const double m_hat = m[k] / correction1;
    const double v_hat = v[k] / correction2;
    p[k] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
}

}  // namespace

AdamState AdamState::fresh(const NetworkParams& shape, AdamConfig config) {
  AdamState s;
  s.config = config;
  s.first_moment = shape.zeros_like();
  s.second_moment = shape.zeros_like();
  return s;
}

void adam_step(NetworkParams& params, const Gradient& grad, AdamState& state) {
  check_same_shape(params, grad);
  check_same_shape(params, state.first_moment);
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double correction1 = 1.0 - std::pow(state.config.beta1, t);
  const double correction2 = 1.0 - std::pow(state.config.beta2, t);
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    update(params.weights[l], grad.weights[l], state.first_moment.weights[l],
           state.second_moment.weights[l], state.config, correction1, correction2);
    update(params.biases[l], grad.biases[l], state.first_moment.biases[l],
           state.second_moment.biases[l], state.config, correction1, correction2);
  }
}

void reset_optimizer(AdamState& state) {
  zero_fill(state.first_moment);
  zero_fill(state.second_moment);
  state.step_count = 0;
}

}  // namespace sparserl::nn
