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

#include "sparserl/agents/population_kernels.hpp"

#include <omp.h>

#include "sparserl/agents/value_based.hpp"

namespace sparserl::agents {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  const int team = threads > 0 ? threads : omp_get_max_threads();
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for num_threads(team) schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> train_members_serial(std::vector<Member>& members, const replay::Batch& batch,
                                         std::span<const double> targets) {
  std::vector<double> losses(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    losses[k] = train_member(members[k], batch, targets, k);
  }
  return losses;
}

std::vector<double> train_members_parallel(std::vector<Member>& members,
                                           const replay::Batch& batch,
                                           std::span<const double> targets, int threads) {
  std::vector<double> losses(members.size());
  parallel_for(members.size(), threads, [&](std::size_t k) {
    losses[k] = train_member(members[k], batch, targets, k);
  });
  return losses;
}

}  // namespace sparserl::agents
