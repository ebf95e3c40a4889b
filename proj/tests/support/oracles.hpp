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

// Independent reference computations for tests. Nothing here calls the
// library's forward/backward code.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "sparserl/common/rng.hpp"
#include "sparserl/nncore/network.hpp"
#include "sparserl/pruning/mask.hpp"

namespace oracle {

using sparserl::nn::Activation;
using sparserl::nn::NetworkParams;
using sparserl::pruning::Mask;

struct NaiveOutput {
  std::vector<double> output;
  std::vector<double> preactivations;  // every hidden/output pre-activation, in order
};

inline double activate(Activation a, double z) {
  switch (a) {
    case Activation::relu:
      return z > 0.0 ? z : 0.0;
    case Activation::tanh:
      return std::tanh(z);
    case Activation::identity:
      return z;
  }
  return z;
}

// Textbook y = act(W x + b) per layer with W read as (out x in) row-major.
inline NaiveOutput naive_forward(const NetworkParams& p, const Mask& m, const std::vector<double>& x) {
  NaiveOutput out;
  std::vector<double> h = x;
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const auto& spec = p.layers[l];
    std::vector<double> next(spec.output_width);
    for (std::size_t o = 0; o < spec.output_width; ++o) {
      double z = p.biases[l][o];
      for (std::size_t i = 0; i < spec.input_width; ++i) {
        const std::size_t k = o * spec.input_width + i;
        z += (m.layers[l][k] ? p.weights[l][k] : 0.0) * h[i];
      }
      out.preactivations.push_back(z);
      next[o] = activate(spec.activation, z);
    }
    h = std::move(next);
  }
  out.output = std::move(h);
  return out;
}

// sum_b (y_b - Q(x_b)[a_b])^2
inline double naive_td_loss(const NetworkParams& p, const Mask& m, const std::vector<double>& inputs,
                            const std::vector<std::size_t>& actions, const std::vector<double>& targets) {
  const std::size_t batch = targets.size();
  const std::size_t width = inputs.size() / batch;
  double loss = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    std::vector<double> x(inputs.begin() + static_cast<std::ptrdiff_t>(b * width),
                          inputs.begin() + static_cast<std::ptrdiff_t>((b + 1) * width));
    const double q = naive_forward(p, m, x).output[actions[b]];
    loss += (targets[b] - q) * (targets[b] - q);
  }
  return loss;
}

// Visits every weight and bias coordinate of `p`.
inline void for_each_coordinate(NetworkParams& p, const std::function<void(double&, bool is_weight,
                                                                              std::size_t layer,
                                                                              std::size_t index)>& fn) {
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    for (std::size_t k = 0; k < p.weights[l].size(); ++k) fn(p.weights[l][k], true, l, k);
    for (std::size_t k = 0; k < p.biases[l].size(); ++k) fn(p.biases[l][k], false, l, k);
  }
}

struct GradientComparison {
  double max_relative_error = 0.0;
  std::size_t compared = 0;
  std::size_t skipped_kinks = 0;
};

inline double relative_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-6});
  return std::abs(a - b) / scale;
}

// Central differences of `loss(params)` with step h, compared with
// `analytic`. Coordinates where a ReLU changes side within +-h are skipped
// (the loss is not differentiable there); `kinks(params)` returns the
// pre-activation vector whose signs define the ReLU pattern.
inline GradientComparison compare_with_finite_differences(
    const NetworkParams& params, const NetworkParams& analytic,
    const std::function<double(const NetworkParams&)>& loss,
    const std::function<std::vector<double>(const NetworkParams&)>& kinks, double h = 1e-5) {
  GradientComparison result;
  NetworkParams probe = params;
  NetworkParams grad = analytic;
  std::vector<double*> analytic_entries;
  for_each_coordinate(grad, [&](double& g, bool, std::size_t, std::size_t) { analytic_entries.push_back(&g); });
  std::size_t idx = 0;
  const auto base_pattern = kinks(params);
  auto same_side = [&](const std::vector<double>& z) {
    for (std::size_t i = 0; i < z.size(); ++i) {
      if ((z[i] > 0.0) != (base_pattern[i] > 0.0)) return false;
    }
    return true;
  };
  for_each_coordinate(probe, [&](double& w, bool, std::size_t, std::size_t) {
    const double g = *analytic_entries[idx++];
    const double saved = w;
    w = saved + h;
    const double up = loss(probe);
    const bool up_ok = same_side(kinks(probe));
    w = saved - h;
    const double down = loss(probe);
    const bool down_ok = same_side(kinks(probe));
    w = saved;
    if (!up_ok || !down_ok) {
      ++result.skipped_kinks;
      return;
    }
    const double fd = (up - down) / (2.0 * h);
    result.max_relative_error = std::max(result.max_relative_error, relative_error(g, fd));
    ++result.compared;
  });
  return result;
}

// Sort-based reference for per-layer magnitude pruning: rank by (|w|, index).
inline std::vector<std::uint8_t> sorted_magnitude_mask(const std::vector<double>& w, std::size_t zeros) {
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(w[a]) < std::abs(w[b]); });
  std::vector<std::uint8_t> mask(w.size(), 1);
  for (std::size_t i = 0; i < zeros; ++i) mask[order[i]] = 0;
  return mask;
}

// Brute-force interquartile mean: remove min and max floor(n/4) times each.
inline double brute_force_iqm(std::vector<double> v) {
  const std::size_t cut = v.size() / 4;
  for (std::size_t i = 0; i < cut; ++i) {
    v.erase(std::min_element(v.begin(), v.end()));
    v.erase(std::max_element(v.begin(), v.end()));
  }
  // Summed in ascending order so "exact" is well defined.
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Two-sided one-sample Kolmogorov-Smirnov statistic against a CDF.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

// Asymptotic critical value of the KS statistic at level alpha = 0.01.
inline double ks_critical_001(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

// Random network with widths <= max_width and up to max_layers layers.
inline NetworkParams random_network(sparserl::RngStream& rng, std::size_t max_layers, std::size_t max_width) {
  std::vector<sparserl::nn::LayerSpec> specs;
  const std::size_t layers = 1 + rng.uniform_index(max_layers);
  std::size_t in = 1 + rng.uniform_index(max_width);
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t out = 1 + rng.uniform_index(max_width);
    const auto act = l + 1 == layers ? Activation::identity
                                     : static_cast<Activation>(rng.uniform_index(3));
    specs.push_back({in, out, act});
    in = out;
  }
  NetworkParams p;
  p.layers = specs;
  for (const auto& s : specs) {
    std::vector<double> w(s.input_width * s.output_width);
    for (double& x : w) x = rng.uniform(-1.0, 1.0);
    std::vector<double> b(s.output_width);
    for (double& x : b) x = rng.uniform(-0.5, 0.5);
    p.weights.push_back(std::move(w));
    p.biases.push_back(std::move(b));
  }
  return p;
}

inline Mask random_mask(const NetworkParams& p, sparserl::RngStream& rng, double keep) {
  Mask m;
  for (const auto& w : p.weights) {
    std::vector<std::uint8_t> layer(w.size());
    for (auto& x : layer) x = rng.uniform() < keep ? 1 : 0;
    m.layers.push_back(std::move(layer));
  }
  return m;
}

}  // namespace oracle
