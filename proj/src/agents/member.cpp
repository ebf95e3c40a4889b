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

#include "sparserl/agents/member.hpp"

#include <stdexcept>

#include "sparserl/pruning/pruning.hpp"

namespace sparserl::agents {

Member Member::dense(nn::NetworkParams params, nn::AdamConfig adam, std::int64_t lineage_id) {
  Member m;
  m.mask = pruning::Mask::ones_like(params);
  m.optimizer = nn::AdamState::fresh(params, adam);
  m.params = std::move(params);
  m.lineage_id = lineage_id;
  return m;
}

void prune_member(Member& member, double target) {
  member.mask = pruning::magnitude_mask(member.params, target, member.mask);
  for (std::size_t l = 0; l < member.params.weights.size(); ++l) {
    const auto& m = member.mask.layers[l];
    auto& w = member.params.weights[l];
    auto& m1 = member.optimizer.first_moment.weights[l];
    auto& m2 = member.optimizer.second_moment.weights[l];
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (!m[k]) {
        w[k] = 0.0;
        m1[k] = 0.0;
        m2[k] = 0.0;
      }
    }
  }
  member.sparsity = pruning::sparsity_of(member.mask);
}

void check_member(const Member& member) {
  pruning::check_shape(member.params, member.mask);
  if (member.sparsity != pruning::sparsity_of(member.mask)) {
    throw std::logic_error("member sparsity does not match its mask");
  }
  for (std::size_t l = 0; l < member.params.weights.size(); ++l) {
    for (std::size_t k = 0; k < member.params.weights[l].size(); ++k) {
      if (!member.mask.layers[l][k] && member.params.weights[l][k] != 0.0) {
        throw std::logic_error("masked weight is not zero");
      }
    }
  }
}

std::vector<double> losses_of(const std::vector<Member>& members) {
  std::vector<double> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.cumulated_loss);
  return out;
}

void Population::copy_target_from(std::size_t index) {
  champion = index;
  target_params = members.at(index).params;
  target_mask = members.at(index).mask;
}

}  // namespace sparserl::agents
