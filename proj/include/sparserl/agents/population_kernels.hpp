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
#include <exception>
#include <functional>
#include <span>
#include <vector>

#include "sparserl/agents/member.hpp"
#include "sparserl/replay/replay_buffer.hpp"

namespace sparserl::agents {

// Runs fn(i) for i in [0, n) across `threads` OpenMP threads (<= 0: runtime
// default). Iterations must be independent. The first exception thrown by
// any iteration, in index order, is rethrown after the join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Reference kernel: members trained one after another.
std::vector<double> train_members_serial(std::vector<Member>& members, const replay::Batch& batch,
                                         std::span<const double> targets);

// Members trained concurrently. Bit-identical to the serial kernel: every
// member's update reads only shared const inputs and its own state.
std::vector<double> train_members_parallel(std::vector<Member>& members,
                                           const replay::Batch& batch,
                                           std::span<const double> targets, int threads);

}  // namespace sparserl::agents
