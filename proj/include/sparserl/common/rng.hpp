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

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>

namespace sparserl {

// A named, seeded random stream. Streams derived from the same seed with
// different labels are decorrelated; replaying (seed, label) reproduces the
// exact sequence. All conversions to floating point are done here rather than
// through <random> distributions so the sequence is identical across standard
// library implementations and carries no hidden cached state.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream() : RngStream(0, "default") {}
  RngStream(std::uint64_t seed, std::string label);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double low, double high) { return low + (high - low) * uniform(); }
  // Uniform integer in [0, n). Unbiased (rejection on the top range).
  std::uint64_t uniform_index(std::uint64_t n);
  // Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double normal();

  // Child stream keyed on this stream's seed and `label + "/" + suffix`.
  RngStream derive(std::string_view suffix) const;

  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }

  // Full engine position as text; restore() resumes the exact sequence.
  std::string save_state() const;
  void restore_state(const std::string& state);

  bool operator==(const RngStream& other) const {
    return seed_ == other.seed_ && label_ == other.label_ && engine_ == other.engine_;
  }

 private:
  std::uint64_t seed_;
  std::string label_;
  std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace sparserl
