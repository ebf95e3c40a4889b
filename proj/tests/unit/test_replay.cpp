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

#include <gtest/gtest.h>

#include <filesystem>

#include "sparserl/common/errors.hpp"
#include "sparserl/replay/dataset.hpp"
#include "sparserl/replay/replay_buffer.hpp"

using namespace sparserl;
using namespace sparserl::replay;
using envs::Action;
using envs::Transition;

namespace {

Transition tagged(double tag) {
  return Transition{{tag, 0.0}, Action{std::size_t{0}}, tag, {0.0, tag}, false};
}

std::vector<double> tags(const ReplayBuffer& buf) {
  std::vector<double> out;
  for (const auto& t : buf.contents()) out.push_back(t.reward);
  return out;
}

OfflineDataset pendulum_dataset(std::size_t n) {
  envs::PendulumEnv env;
  RngStream rng(1, "data");
  OfflineDataset d{env.spec(), {}};
  auto s = env.reset(rng);
  for (std::size_t i = 0; i < n; ++i) {
    Action a{std::vector<double>{rng.uniform(-2.0, 2.0)}};
    auto r = env.step(s, a, rng);
    d.transitions.push_back({s, a, r.reward, r.next_state, r.done});
    s = r.next_state;
  }
  return d;
}

}  // namespace

TEST(ReplayBuffer, FifoEviction) {
  ReplayBuffer buf(2);
  buf.push(tagged(1));
  EXPECT_EQ(buf.size(), 1u);
  buf.push(tagged(2));
  buf.push(tagged(3));
  EXPECT_EQ(tags(buf), (std::vector<double>{2, 3}));
  EXPECT_EQ(buf.insert_count(), 3u);
}

TEST(ReplayBuffer, RingArithmetic) {
  ReplayBuffer buf(100);
  for (int i = 1; i <= 1000; ++i) buf.push(tagged(i));
  std::vector<double> want;
  for (int i = 901; i <= 1000; ++i) want.push_back(i);
  EXPECT_EQ(tags(buf), want);
}

TEST(ReplayBuffer, InterleavedPushesKeepOrderAndBound) {
  RngStream rng(2, "interleave");
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t cap = 1 + rng.uniform_index(20);
    ReplayBuffer buf(cap);
    std::vector<double> shadow;
    const int pushes = static_cast<int>(rng.uniform_index(80));
    for (int i = 0; i < pushes; ++i) {
      buf.push(tagged(i));
      shadow.push_back(i);
      if (shadow.size() > cap) shadow.erase(shadow.begin());
      ASSERT_EQ(buf.size(), std::min<std::size_t>(static_cast<std::size_t>(i + 1), cap));
      if (rng.uniform() < 0.3) buf.sample_batch(3, rng);
    }
    EXPECT_EQ(tags(buf), shadow);
  }
}

TEST(ReplayBuffer, SampleEdgeCases) {
  ReplayBuffer buf(4);
  RngStream rng(3, "s");
  EXPECT_THROW(buf.sample_batch(4, rng), ArgumentError);
  buf.push(tagged(7));
  const auto b = buf.sample_batch(5, rng);
  EXPECT_EQ(b.rewards, (std::vector<double>(5, 7.0)));
  EXPECT_EQ(b.transition(3), tagged(7));
}

TEST(ReplayBuffer, SamplingDeterministic) {
  ReplayBuffer buf(10);
  for (int i = 0; i < 10; ++i) buf.push(tagged(i));
  RngStream a(4, "s"), b(4, "s");
  EXPECT_EQ(buf.sample_batch(32, a).rewards, buf.sample_batch(32, b).rewards);
}

TEST(ReplayBuffer, UniformFrequencies) {
  ReplayBuffer buf(4);
  for (int i = 0; i < 4; ++i) buf.push(tagged(i));
  RngStream rng(5, "uniform");
  std::vector<double> counts(4, 0.0);
  const auto b = buf.sample_batch(100000, rng);
  for (double r : b.rewards) counts[static_cast<std::size_t>(r)] += 1.0;
  for (double c : counts) EXPECT_NEAR(c / 100000.0, 0.25, 0.01);
}

TEST(Batch, LayoutMatchesTransitions) {
  const auto d = pendulum_dataset(5);
  const auto batch = Batch::from_transitions(d.transitions);
  EXPECT_EQ(batch.observation_width, 3u);
  EXPECT_EQ(batch.action_width, 1u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(batch.transition(i), d.transitions[i]);
}

TEST(Dataset, RoundTripBitExact) {
  const auto d = pendulum_dataset(64);
  const auto bytes = encode_dataset(d);
  const auto back = decode_dataset(bytes);
  EXPECT_EQ(back.transitions, d.transitions);
  EXPECT_EQ(back.source_env.id, d.source_env.id);
  EXPECT_EQ(encode_dataset(back), bytes);

  const auto path = std::filesystem::temp_directory_path() / "sparserl_dataset_test.bin";
  save_dataset(d, path);
  EXPECT_EQ(load_dataset(path).transitions, d.transitions);
  std::filesystem::remove(path);
}

TEST(Dataset, TruncationNamesOffsetAndRecord) {
  const auto d = pendulum_dataset(10);
  const auto bytes = encode_dataset(d);
  const std::size_t record_bytes = (3 + 1 + 1 + 3) * 8 + 1;
  const std::size_t header = bytes.size() - 10 * record_bytes;
  const std::size_t cut = header + 6 * record_bytes + 5;
  try {
    decode_dataset(std::string_view(bytes).substr(0, cut));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.record(), std::optional<std::size_t>(6));
    EXPECT_GE(e.offset(), header + 6 * record_bytes);
    EXPECT_LE(e.offset(), cut);
  }
  EXPECT_THROW(decode_dataset(std::string_view(bytes).substr(0, 3)), ParseError);
  auto trailing = bytes + "x";
  EXPECT_THROW(decode_dataset(trailing), ParseError);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_dataset(bad_magic), ParseError);
}

TEST(Dataset, RefusesEmptyAndInconsistent) {
  OfflineDataset empty{envs::ChainEnv().spec(), {}};
  EXPECT_THROW(encode_dataset(empty), ArgumentError);
  auto d = pendulum_dataset(3);
  d.transitions[1].state.push_back(0.0);
  EXPECT_THROW(encode_dataset(d), ArgumentError);
  d = pendulum_dataset(3);
  d.transitions[2].action = Action{std::size_t{0}};
  EXPECT_THROW(d.validate(), ArgumentError);
}
