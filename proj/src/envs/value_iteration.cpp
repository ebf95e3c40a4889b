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

#include "sparserl/envs/value_iteration.hpp"

#include <algorithm>
#include <cmath>

#include "sparserl/common/errors.hpp"

namespace sparserl::envs {

double QTable::value(std::size_t s) const {
  return *std::max_element(values.begin() + static_cast<std::ptrdiff_t>(s * num_actions),
                           values.begin() + static_cast<std::ptrdiff_t>((s + 1) * num_actions));
}

std::size_t QTable::greedy(std::size_t s) const {
  std::size_t best = 0;
  for (std::size_t a = 1; a < num_actions; ++a) {
    if (at(s, a) > at(s, best)) best = a;
  }
  return best;
}

std::vector<std::size_t> QTable::optimal_actions(std::size_t s, double tolerance) const {
  const double v = value(s);
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < num_actions; ++a) {
    if (at(s, a) >= v - tolerance) out.push_back(a);
  }
  return out;
}

QTable value_iteration(const Environment& env, double discount, double tolerance) {
  const auto* tab = dynamic_cast<const TabularEnvironment*>(&env);
  if (tab == nullptr) {
    throw UnsupportedError("value_iteration needs a tabular environment, got " +
                           to_string(env.spec().id));
  }
  if (!(discount >= 0.0 && discount < 1.0)) throw ArgumentError("discount must lie in [0, 1)");
  if (!(tolerance > 0.0)) throw ArgumentError("tolerance must be positive");

  QTable q;
  q.num_states = tab->num_states();
  q.num_actions = tab->num_actions();
  q.values.assign(q.num_states * q.num_actions, 0.0);
  std::vector<double> v(q.num_states, 0.0);
  while (true) {
    double residual = 0.0;
    std::vector<double> next(q.values.size(), 0.0);
    for (std::size_t s = 0; s < q.num_states; ++s) {
      if (tab->terminal(s)) continue;
      for (std::size_t a = 0; a < q.num_actions; ++a) {
        const auto o = tab->outcome(s, a);
        const double bootstrap = o.done ? 0.0 : discount * v[o.next_state];
        const double updated = o.reward + bootstrap;
        residual = std::max(residual, std::abs(updated - q.values[s * q.num_actions + a]));
        next[s * q.num_actions + a] = updated;
      }
    }
    q.values = std::move(next);
    for (std::size_t s = 0; s < q.num_states; ++s) v[s] = q.value(s);
    ++q.sweeps;
    if (residual < tolerance) break;
  }
  return q;
}

}  // namespace sparserl::envs
