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

#include <cmath>
#include <limits>

#include "../support/oracles.hpp"
#include "sparserl/common/errors.hpp"
#include "sparserl/nncore/adam.hpp"
#include "sparserl/nncore/network.hpp"
#include "sparserl/pruning/mask.hpp"

using namespace sparserl;
using nn::Activation;
using nn::NetworkParams;
using pruning::Mask;

namespace {

NetworkParams single_layer(std::vector<double> w, std::vector<double> b, std::size_t in, std::size_t out,
                           Activation act = Activation::identity) {
  NetworkParams p;
  p.layers = {{in, out, act}};
  p.weights = {std::move(w)};
  p.biases = {std::move(b)};
  return p;
}

std::vector<double> random_vector(RngStream& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

}  // namespace

TEST(Forward, HandMatrixMultiply) {
  const auto p = single_layer({1, 2, 3, 4}, {0, 0}, 2, 2);
  const std::vector<double> x{1, 1};
  EXPECT_EQ(nn::forward(p, Mask::ones_like(p), x), (std::vector<double>{3, 7}));
}

TEST(Forward, ZeroNetworkGivesZeroOutput) {
  RngStream rng(1, "t");
  auto p = NetworkParams::zeros(nn::mlp_specs(3, std::vector<std::size_t>{4}, 2));
  const auto out = nn::forward(p, Mask::ones_like(p), random_vector(rng, 3));
  for (double v : out) EXPECT_EQ(v, 0.0);
}

TEST(Forward, MatchesNaiveOracleAndAbsorbsMask) {
  RngStream rng(2, "forward");
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = oracle::random_network(rng, 3, 8);
    const auto m = oracle::random_mask(p, rng, 0.7);
    const auto x = random_vector(rng, p.input_width());
    const auto got = nn::forward(p, m, x);
    const auto want = oracle::naive_forward(p, m, x).output;
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
    // w * mask with an all-ones mask gives the identical result.
    NetworkParams absorbed = p;
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
      for (std::size_t k = 0; k < p.weights[l].size(); ++k) {
        if (!m.layers[l][k]) absorbed.weights[l][k] = 0.0;
      }
    }
    EXPECT_EQ(nn::forward(absorbed, Mask::ones_like(p), x), got);
  }
}

TEST(Forward, BatchRowsEqualSingleCalls) {
  RngStream rng(3, "batch");
  const auto p = oracle::random_network(rng, 3, 6);
  const auto m = Mask::ones_like(p);
  const std::size_t batch = 5;
  const auto xs = random_vector(rng, batch * p.input_width());
  const auto cache = nn::forward_batch(p, m, xs, batch);
  for (std::size_t b = 0; b < batch; ++b) {
    std::span<const double> row(xs.data() + b * p.input_width(), p.input_width());
    const auto single = nn::forward(p, m, row);
    for (std::size_t o = 0; o < single.size(); ++o) {
      EXPECT_EQ(cache.output()[b * p.output_width() + o], single[o]);
    }
  }
}

TEST(Forward, ShapeMismatchIsConfigError) {
  const auto p = single_layer({1, 2, 3, 4}, {0, 0}, 2, 2);
  const std::vector<double> x{1, 1, 1};
  EXPECT_THROW(nn::forward(p, Mask::ones_like(p), x), ConfigError);
  Mask bad;
  bad.layers = {{1, 1, 1}};
  EXPECT_THROW(nn::forward(p, bad, std::vector<double>{1, 1}), ConfigError);
}

TEST(Backward, MatchesFiniteDifferences) {
  RngStream rng(4, "fd");
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = oracle::random_network(rng, 3, 8);
    const auto m = oracle::random_mask(p, rng, 0.8);
    const std::size_t batch = 4;
    const auto xs = random_vector(rng, batch * p.input_width());
    std::vector<std::size_t> actions(batch);
    for (auto& a : actions) a = rng.uniform_index(p.output_width());
    const auto ys = random_vector(rng, batch);
    const auto lg = nn::td_backward(p, m, xs, actions, ys);
    EXPECT_NEAR(lg.loss, oracle::naive_td_loss(p, m, xs, actions, ys), 1e-10);
    const auto cmp = oracle::compare_with_finite_differences(
        p, lg.gradient, [&](const NetworkParams& q) { return oracle::naive_td_loss(q, m, xs, actions, ys); },
        [&](const NetworkParams& q) {
          std::vector<double> z;
          for (std::size_t b = 0; b < batch; ++b) {
            std::vector<double> x(xs.begin() + static_cast<std::ptrdiff_t>(b * p.input_width()),
                                  xs.begin() + static_cast<std::ptrdiff_t>((b + 1) * p.input_width()));
            const auto pre = oracle::naive_forward(q, m, x).preactivations;
            z.insert(z.end(), pre.begin(), pre.end());
          }
          return z;
        });
    EXPECT_LT(cmp.max_relative_error, 1e-4);
  }
}

TEST(Backward, ZeroResidualGivesZeroGradient) {
  RngStream rng(5, "zero");
  const auto p = oracle::random_network(rng, 2, 5);
  const auto m = Mask::ones_like(p);
  const auto xs = random_vector(rng, 3 * p.input_width());
  std::vector<std::size_t> actions{0, 0, 0};
  std::vector<double> ys;
  for (std::size_t b = 0; b < 3; ++b) {
    ys.push_back(nn::forward(p, m, std::span<const double>(xs.data() + b * p.input_width(), p.input_width()))[0]);
  }
  const auto lg = nn::td_backward(p, m, xs, actions, ys);
  EXPECT_EQ(lg.loss, 0.0);
  for (const auto& w : lg.gradient.weights) {
    for (double g : w) EXPECT_EQ(g, 0.0);
  }
}

TEST(Backward, MaskedPositionsHaveExactlyZeroGradient) {
  RngStream rng(6, "masked");
  const auto p = oracle::random_network(rng, 3, 6);
  auto m = oracle::random_mask(p, rng, 0.5);
  std::fill(m.layers[0].begin(), m.layers[0].end(), 0);
  const auto xs = random_vector(rng, 4 * p.input_width());
  const std::vector<std::size_t> actions(4, 0);
  const auto ys = random_vector(rng, 4);
  const auto lg = nn::td_backward(p, m, xs, actions, ys);
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    for (std::size_t k = 0; k < p.weights[l].size(); ++k) {
      if (!m.layers[l][k]) EXPECT_EQ(lg.gradient.weights[l][k], 0.0);
    }
  }
}

TEST(Backward, NonFiniteActivationNamesLayer) {
  auto p = single_layer({1, 1}, {0}, 2, 1);
  const std::vector<double> xs{std::numeric_limits<double>::infinity(), 1.0};
  const std::vector<std::size_t> actions{0};
  const std::vector<double> ys{0.0};
  try {
    nn::td_backward(p, Mask::ones_like(p), xs, actions, ys);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_EQ(e.layer(), 0);
  }
}

TEST(Adam, ZeroGradientFreshStateKeepsParams) {
  RngStream rng(7, "adam");
  auto p = oracle::random_network(rng, 2, 4);
  const auto before = p;
  auto st = nn::AdamState::fresh(p, {});
  nn::adam_step(p, p.zeros_like(), st);
  EXPECT_EQ(p, before);
  EXPECT_EQ(st.step_count, 1u);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  auto p = single_layer({0.5, -0.5}, {0.0}, 2, 1);
  auto g = p.zeros_like();
  g.weights[0] = {2.0, -3.0};
  g.biases[0] = {0.25};
  nn::AdamConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.epsilon = 1e-12;
  auto st = nn::AdamState::fresh(p, cfg);
  nn::adam_step(p, g, st);
  // m_hat = g, v_hat = g^2, so the step is lr * g / (|g| + eps).
  EXPECT_NEAR(p.weights[0][0], 0.5 - 0.01, 1e-12);
  EXPECT_NEAR(p.weights[0][1], -0.5 + 0.01, 1e-12);
  EXPECT_NEAR(p.biases[0][0], -0.01, 1e-12);
}

TEST(Adam, MatchesHandRolledRecurrence) {
  RngStream rng(8, "adam-ref");
  auto p = single_layer({0.3, -0.2, 0.7}, {0.1}, 3, 1);
  nn::AdamConfig cfg{0.005, 1.5e-4, 0.9, 0.999};
  auto st = nn::AdamState::fresh(p, cfg);
  std::vector<double> w = p.weights[0], m1(3, 0.0), m2(3, 0.0);
  for (int t = 1; t <= 20; ++t) {
    auto g = p.zeros_like();
    for (auto& x : g.weights[0]) x = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < 3; ++i) {
      const double gi = g.weights[0][static_cast<std::size_t>(i)];
      m1[i] = 0.9 * m1[i] + 0.1 * gi;
      m2[i] = 0.999 * m2[i] + 0.001 * gi * gi;
      const double mh = m1[i] / (1.0 - std::pow(0.9, t));
      const double vh = m2[i] / (1.0 - std::pow(0.999, t));
      w[i] -= 0.005 * mh / (std::sqrt(vh) + 1.5e-4);
    }
    nn::adam_step(p, g, st);
  }
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p.weights[0][static_cast<std::size_t>(i)], w[i], 1e-12);
  EXPECT_EQ(st.step_count, 20u);
}

TEST(Adam, ResetMatchesFreshOptimizer) {
  RngStream rng(9, "reset");
  auto p = oracle::random_network(rng, 2, 4);
  auto st = nn::AdamState::fresh(p, {0.01, 1.5e-4, 0.9, 0.999});
  for (int i = 0; i < 100; ++i) {
    auto g = p.zeros_like();
    for (auto& w : g.weights) {
      for (double& x : w) x = rng.normal();
    }
    nn::adam_step(p, g, st);
  }
  nn::reset_optimizer(st);
  EXPECT_EQ(st.step_count, 0u);
  EXPECT_EQ(st.config.learning_rate, 0.01);
  EXPECT_EQ(st.first_moment, p.zeros_like());
  EXPECT_EQ(st.second_moment, p.zeros_like());
  auto g = p.zeros_like();
  for (auto& w : g.weights) {
    for (double& x : w) x = rng.normal();
  }
  auto a = p;
  auto b = p;
  auto fresh = nn::AdamState::fresh(p, st.config);
  nn::adam_step(a, g, st);
  nn::adam_step(b, g, fresh);
  EXPECT_EQ(a, b);
}

TEST(Adam, MaskedPositionsAreFixedPoints) {
  RngStream rng(10, "fixed");
  auto p = oracle::random_network(rng, 3, 6);
  const auto m = oracle::random_mask(p, rng, 0.6);
  const auto before = p;
  auto st = nn::AdamState::fresh(p, {});
  for (int i = 0; i < 50; ++i) {
    const auto xs = random_vector(rng, 8 * p.input_width());
    std::vector<std::size_t> actions(8);
    for (auto& a : actions) a = rng.uniform_index(p.output_width());
    const auto ys = random_vector(rng, 8);
    nn::adam_step(p, nn::td_backward(p, m, xs, actions, ys).gradient, st);
  }
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    for (std::size_t k = 0; k < p.weights[l].size(); ++k) {
      if (!m.layers[l][k]) EXPECT_EQ(p.weights[l][k], before.weights[l][k]);
    }
  }
}

TEST(Init, DeterministicZeroBiasBoundedWeights) {
  const auto specs = nn::mlp_specs(32, std::vector<std::size_t>{32}, 32);
  RngStream a(11, "member/0/init");
  RngStream b(11, "member/0/init");
  const auto p = nn::init_network(specs, a);
  EXPECT_EQ(p, nn::init_network(specs, b));
  for (const auto& bias : p.biases) {
    for (double x : bias) EXPECT_EQ(x, 0.0);
  }
  const double bound = std::sqrt(6.0 / 64.0);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& w : p.weights) {
    for (double x : w) {
      EXPECT_LE(std::abs(x), bound);
      sum += x;
      ++n;
    }
  }
  EXPECT_EQ(n, 2u * 32 * 32);
  RngStream c(12, "mean");
  std::vector<double> many;
  while (many.size() < 10000) {
    const auto q = nn::init_network({{32, 32, Activation::relu}}, c);
    many.insert(many.end(), q.weights[0].begin(), q.weights[0].end());
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < 10000; ++i) mean += many[i];
  EXPECT_NEAR(mean / 10000.0, 0.0, 0.01);
}

TEST(Init, EmptyOrBrokenSpecsAreConfigErrors) {
  RngStream rng(13, "x");
  EXPECT_THROW(nn::init_network({}, rng), ConfigError);
  EXPECT_THROW(nn::init_network({{2, 3, Activation::relu}, {4, 1, Activation::identity}}, rng), ConfigError);
  EXPECT_THROW(nn::init_network({{0, 3, Activation::relu}}, rng), ConfigError);
}
