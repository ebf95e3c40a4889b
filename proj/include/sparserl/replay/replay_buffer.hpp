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
#include <cstdint>
#include <vector>

#include "sparserl/common/rng.hpp"
#include "sparserl/envs/environment.hpp"

namespace sparserl::replay {

// Column-major view of a sampled mini-batch, laid out for the network kernels.
struct Batch {
  std::size_t size = 0;
  std::size_t observation_width = 0;
  std::size_t action_width = 0;
  std::vector<double> states;               // size x observation_width
  std::vector<std::size_t> action_indices;  // discrete spaces
  std::vector<double> action_vectors;       // continuous spaces, size x action_width
  std::vector<double> rewards;
  std::vector<double> next_states;
  std::vector<std::uint8_t> dones;

  // Rebuilds the b-th record.
  envs::Transition transition(std::size_t b) const;
  static Batch from_transitions(const std::vector<envs::Transition>& transitions);
};

// Fixed-capacity FIFO ring.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(envs::Transition transition);
  // Uniform with replacement. Throws ArgumentError when empty.
  Batch sample_batch(std::size_t batch_size, RngStream& rng) const;

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return storage_.size(); }
  std::uint64_t insert_count() const { return insert_count_; }
  // i-th oldest stored transition.
  const envs::Transition& at(std::size_t i) const;
  std::vector<envs::Transition> contents() const;

  // Ring internals, for checkpointing: sampling depends on slot order.
  std::size_t head() const { return head_; }
  const std::vector<envs::Transition>& slots() const { return storage_; }
  static ReplayBuffer restore(std::size_t capacity, std::uint64_t insert_count, std::size_t head,
                              std::vector<envs::Transition> slots);

  bool operator==(const ReplayBuffer& other) const {
    return capacity_ == other.capacity_ && insert_count_ == other.insert_count_ &&
           contents() == other.contents();
  }

 private:
  std::size_t capacity_;
  std::uint64_t insert_count_ = 0;
  std::size_t head_ = 0;  // slot of the oldest element once full
  std::vector<envs::Transition> storage_;
};

}  // namespace sparserl::replay
