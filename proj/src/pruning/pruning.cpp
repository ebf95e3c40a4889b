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

#include "sparserl/pruning/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparserl/common/errors.hpp"

namespace sparserl::pruning {

double sparsity_of(const Mask& mask) {
  const std::size_t n = mask.entry_count();
  if (n == 0) return 0.0;
  return static_cast<double>(mask.zero_count()) / static_cast<double>(n);
}

std::size_t pruned_count(std::size_t count, double target) {
  const auto k = static_cast<std::size_t>(std::floor(target * static_cast<double>(count) + 0.5));
  return std::min(k, count);
}

namespace {

void check_target(double target) {
  if (!(target >= 0.0 && target <= 1.0)) {
    throw ArgumentError("magnitude_mask: target sparsity " + std::to_string(target) +
                        " outside [0, 1]");
  }
}

std::vector<std::uint8_t> prune_layer(const std::vector<double>& w, std::size_t zeros,
                                      const std::vector<std::uint8_t>* previous) {
  std::vector<std::uint8_t> m(w.size(), 1);
  if (zeros == 0) return m;
  auto rank = [&](std::size_t k) { return previous && !(*previous)[k] ? -1.0 : std::abs(w[k]); };
  std::vector<std::size_t> idx(w.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    const double ra = rank(a), rb = rank(b);
    return ra < rb || (ra == rb && a < b);
  };
  if (zeros < idx.size()) {
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(zeros), idx.end(), less);
  }
  for (std::size_t j = 0; j < zeros; ++j) m[idx[j]] = 0;
  return m;
}

}  // namespace

Mask magnitude_mask(const nn::NetworkParams& params, double target) {
  check_target(target);
  Mask mask;
  for (const auto& w : params.weights) {
    mask.layers.push_back(prune_layer(w, pruned_count(w.size(), target), nullptr));
  }
  return mask;
}

Mask magnitude_mask(const nn::NetworkParams& params, double target, const Mask& previous) {
  check_target(target);
  check_shape(params, previous);
  Mask mask;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    const auto& prev = previous.layers[l];
    const auto already = static_cast<std::size_t>(std::count(prev.begin(), prev.end(), 0));
    const std::size_t zeros = std::max(already, pruned_count(prev.size(), target));
    mask.layers.push_back(prune_layer(params.weights[l], zeros, &prev));
  }
  return mask;
}

void apply_mask_in_place(nn::NetworkParams& params, const Mask& mask) {
  check_shape(params, mask);
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    auto& w = params.weights[l];
    const auto& m = mask.layers[l];
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (!m[k]) w[k] = 0.0;
    }
  }
}

nn::NetworkParams apply_mask(nn::NetworkParams params, const Mask& mask) {
  apply_mask_in_place(params, mask);
  return params;
}

void PolyPruneConfig::validate() const {
  if (!(final_sparsity >= 0.0 && final_sparsity < 1.0)) {
    throw ConfigError("polyprune: final sparsity must lie in [0, 1)");
  }
  if (!(exponent >= 1.0)) throw ConfigError("polyprune: exponent must be >= 1");
  if (t_start < 0 || t_start >= t_end || t_end > t_final) {
    throw ConfigError("polyprune: need 0 <= t_start < t_end <= t_final");
  }
  if (pruning_period <= 0) throw ConfigError("polyprune: pruning period must be positive");
}

double poly_schedule(std::int64_t t, const PolyPruneConfig& cfg) {
  const double progress = std::clamp(static_cast<double>(t - cfg.t_start) /
                                         static_cast<double>(cfg.t_end - cfg.t_start),
                                     0.0, 1.0);
  return cfg.final_sparsity * (1.0 - std::pow(1.0 - progress, cfg.exponent));
}

void EauDeConfig::validate() const {
  if (!(u_max >= 0.0)) throw ConfigError("eaude: u_max must be non-negative");
  if (!(s_max > 0.0 && s_max <= 1.0)) throw ConfigError("eaude: s_max must lie in (0, 1]");
  if (population_size < 1) throw ConfigError("eaude: population size must be >= 1");
  if (tournament_size < 1 || tournament_size > population_size) {
    throw ConfigError("eaude: tournament size must lie in [1, population size]");
  }
  if (t_final <= 0) throw ConfigError("eaude: t_final must be positive");
}

double sparsity_step(double s_t, std::int64_t t, std::int64_t t_next, const EauDeConfig& cfg,
                     double u) {
  if (t >= cfg.t_final) throw ScheduleExhausted("sparsity schedule exhausted at t_final");
  if (!(s_t >= 0.0 && s_t < 1.0)) throw ArgumentError("sample_sparsity: s_t outside [0, 1)");
  if (t_next <= t || t_next > cfg.t_final) {
    throw ArgumentError("sample_sparsity: need t < t_next <= t_final");
  }
  const double remaining = 1.0 - s_t;
  const double linear = remaining / static_cast<double>(cfg.t_final - t) *
                        static_cast<double>(t_next - t) * u;
  const double cap = remaining * cfg.s_max;
  const double next = s_t + std::min(linear, cap);
  return std::min(next, std::nextafter(1.0, 0.0));
}

double sample_sparsity(double s_t, std::int64_t t, std::int64_t t_next, const EauDeConfig& cfg,
                       RngStream& rng) {
  if (t >= cfg.t_final) throw ScheduleExhausted("sparsity schedule exhausted at t_final");
  const double u = rng.uniform() * cfg.u_max;
  return sparsity_step(s_t, t, t_next, cfg, u);
}

}  // namespace sparserl::pruning
