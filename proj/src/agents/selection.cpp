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

#include "sparserl/agents/selection.hpp"

#include <algorithm>
#include <numeric>

#include "sparserl/common/errors.hpp"

namespace sparserl::agents {

std::vector<double> behavior_distribution(std::span<const double> losses) {
  if (losses.empty()) throw ArgumentError("behavior_distribution: empty population");
  const std::size_t k = losses.size();
  const bool all_tiny =
      std::all_of(losses.begin(), losses.end(), [](double l) { return l < kLossFloor; });
  if (all_tiny) return std::vector<double>(k, 1.0 / static_cast<double>(k));
  std::vector<double> p(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    p[i] = 1.0 / std::max(losses[i], kLossFloor);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

std::size_t sample_index(std::span<const double> probabilities, RngStream& rng) {
  if (probabilities.empty()) throw ArgumentError("sample_index: empty distribution");
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    cumulative += probabilities[i];
    if (u < cumulative) return i;
  }
  // Rounding left the total slightly below 1: fall back to the last nonzero entry.
  for (std::size_t i = probabilities.size(); i-- > 0;) {
    if (probabilities[i] > 0.0) return i;
  }
  return probabilities.size() - 1;
}

std::size_t select_target(std::span<const double> losses) {
  if (losses.empty()) throw ArgumentError("select_target: empty population");
  return static_cast<std::size_t>(std::min_element(losses.begin(), losses.end()) - losses.begin());
}

std::size_t tournament_winner(std::span<const double> losses,
                              std::span<const std::size_t> contenders) {
  if (contenders.empty()) throw ArgumentError("tournament with no contenders");
  std::size_t best = contenders[0];
  for (std::size_t c : contenders) {
    if (losses[c] < losses[best] || (losses[c] == losses[best] && c < best)) best = c;
  }
  return best;
}

std::vector<std::size_t> exploitation(
    std::span<const double> losses, std::size_t champion,
    const std::function<std::vector<std::size_t>()>& draw_contenders) {
  std::vector<std::size_t> selection{champion};
  for (std::size_t slot = 1; slot < losses.size(); ++slot) {
    const auto contenders = draw_contenders();
    selection.push_back(tournament_winner(losses, contenders));
  }
  return selection;
}

std::vector<std::size_t> exploitation(std::span<const double> losses, std::size_t champion,
                                      std::size_t tournament_size, RngStream& rng) {
  const std::size_t k = losses.size();
  if (tournament_size < 1 || tournament_size > k) {
    throw ConfigError("tournament size " + std::to_string(tournament_size) +
                      " outside [1, population size " + std::to_string(k) + "]");
  }
  std::vector<std::size_t> pool(k);
  auto draw = [&] {
    // Partial Fisher-Yates: the first tournament_size entries are distinct.
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < tournament_size; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.uniform_index(k - i));
      std::swap(pool[i], pool[j]);
    }
    return std::vector<std::size_t>(pool.begin(),
                                    pool.begin() + static_cast<std::ptrdiff_t>(tournament_size));
  };
  return exploitation(losses, champion, draw);
}

ExplorationResult exploration(const std::vector<Member>& members,
                              std::span<const std::size_t> selection, std::int64_t t,
                              std::int64_t t_next, const pruning::EauDeConfig& cfg,
                              RngStream& rng, std::int64_t& next_lineage_id) {
  if (selection.size() != members.size()) {
    throw ArgumentError("exploration: selection size differs from population size");
  }
  const bool frozen = t >= cfg.t_final;
  std::vector<bool> seen(members.size(), false);
  ExplorationResult out;
  out.members.reserve(members.size());
  for (std::size_t source : selection) {
    if (source >= members.size()) throw ArgumentError("exploration: source index out of range");
    out.sources.push_back(source);
    if (!seen[source]) {
      seen[source] = true;
      out.members.push_back(members[source]);
      out.duplicated.push_back(false);
      continue;
    }
    Member copy = members[source];
    const double level =
        frozen ? copy.sparsity
               : pruning::sample_sparsity(copy.sparsity, t, std::min(t_next, cfg.t_final), cfg, rng);
    if (level > copy.sparsity) prune_member(copy, level);
    nn::reset_optimizer(copy.optimizer);
    copy.lineage_id = next_lineage_id++;
    out.members.push_back(std::move(copy));
    out.duplicated.push_back(true);
  }
  for (auto& m : out.members) m.cumulated_loss = 0.0;
  return out;
}

}  // namespace sparserl::agents
