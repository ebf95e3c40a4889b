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

#include "sparserl/replay/replay_buffer.hpp"

#include <algorithm>

#include "sparserl/common/errors.hpp"

namespace sparserl::replay {

envs::Transition Batch::transition(std::size_t b) const {
  envs::Transition t;
  const auto ow = static_cast<std::ptrdiff_t>(observation_width);
  const auto off = static_cast<std::ptrdiff_t>(b) * ow;
  t.state.assign(states.begin() + off, states.begin() + off + ow);
  t.next_state.assign(next_states.begin() + off, next_states.begin() + off + ow);
  if (!action_indices.empty()) {
    t.action = action_indices[b];
  } else {
    const auto aw = static_cast<std::ptrdiff_t>(action_width);
    const auto aoff = static_cast<std::ptrdiff_t>(b) * aw;
    t.action = std::vector<double>(action_vectors.begin() + aoff, action_vectors.begin() + aoff + aw);
  }
  t.reward = rewards[b];
  t.done = dones[b] != 0;
  return t;
}

Batch Batch::from_transitions(const std::vector<envs::Transition>& transitions) {
  Batch batch;
  if (transitions.empty()) return batch;
  const auto& first = transitions.front();
  batch.size = transitions.size();
  batch.observation_width = first.state.size();
  const bool discrete = std::holds_alternative<std::size_t>(first.action);
  batch.action_width = discrete ? 1 : std::get<std::vector<double>>(first.action).size();
  batch.states.reserve(batch.size * batch.observation_width);
  batch.next_states.reserve(batch.size * batch.observation_width);
  for (const auto& t : transitions) {
    batch.states.insert(batch.states.end(), t.state.begin(), t.state.end());
    batch.next_states.insert(batch.next_states.end(), t.next_state.begin(), t.next_state.end());
    if (discrete) {
      batch.action_indices.push_back(std::get<std::size_t>(t.action));
    } else {
      const auto& a = std::get<std::vector<double>>(t.action);
      batch.action_vectors.insert(batch.action_vectors.end(), a.begin(), a.end());
    }
    batch.rewards.push_back(t.reward);
    batch.dones.push_back(t.done ? 1 : 0);
  }
  return batch;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay capacity must be positive");
  storage_.reserve(capacity);
}

void ReplayBuffer::push(envs::Transition transition) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(transition));
  } else {
    storage_[head_] = std::move(transition);
    head_ = (head_ + 1) % capacity_;
  }
  ++insert_count_;
}

ReplayBuffer ReplayBuffer::restore(std::size_t capacity, std::uint64_t insert_count,
                                   std::size_t head, std::vector<envs::Transition> slots) {
  ReplayBuffer buffer(capacity);
  const bool consistent = slots.size() <= capacity &&
                          slots.size() == std::min<std::uint64_t>(insert_count, capacity) &&
                          (slots.size() < capacity ? head == 0 : head < capacity);
  if (!consistent) throw ArgumentError("replay ring state is inconsistent");
  buffer.insert_count_ = insert_count;
  buffer.head_ = head;
  buffer.storage_ = std::move(slots);
  buffer.storage_.reserve(capacity);
  return buffer;
}

const envs::Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= storage_.size()) throw ArgumentError("replay index out of range");
  return storage_[(head_ + i) % storage_.size()];
}

std::vector<envs::Transition> ReplayBuffer::contents() const {
  std::vector<envs::Transition> out;
  out.reserve(storage_.size());
  for (std::size_t i = 0; i < storage_.size(); ++i) out.push_back(at(i));
  return out;
}

Batch ReplayBuffer::sample_batch(std::size_t batch_size, RngStream& rng) const {
  const std::size_t n = storage_.size();  // one read: the snapshot for this call
  if (n == 0) throw ArgumentError("cannot sample from an empty replay buffer");
  if (batch_size == 0) throw ArgumentError("batch size must be positive");
  const auto& first = storage_.front();
  Batch batch;
  batch.size = batch_size;
  batch.observation_width = first.state.size();
  const bool discrete = std::holds_alternative<std::size_t>(first.action);
  batch.action_width = discrete ? 1 : std::get<std::vector<double>>(first.action).size();
  batch.states.reserve(batch_size * batch.observation_width);
  batch.next_states.reserve(batch_size * batch.observation_width);
  batch.rewards.reserve(batch_size);
  batch.dones.reserve(batch_size);
  for (std::size_t b = 0; b < batch_size; ++b) {
    const auto& t = storage_[rng.uniform_index(n)];
    batch.states.insert(batch.states.end(), t.state.begin(), t.state.end());
    batch.next_states.insert(batch.next_states.end(), t.next_state.begin(), t.next_state.end());
    if (discrete) {
      batch.action_indices.push_back(std::get<std::size_t>(t.action));
    } else {
      const auto& a = std::get<std::vector<double>>(t.action);
      batch.action_vectors.insert(batch.action_vectors.end(), a.begin(), a.end());
    }
    batch.rewards.push_back(t.reward);
    batch.dones.push_back(t.done ? 1 : 0);
  }
  return batch;
}

}  // namespace sparserl::replay
