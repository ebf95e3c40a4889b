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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Optional arguments select criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "sparserl/agents/selection.hpp"
#include "sparserl/harness/aggregate.hpp"
#include "sparserl/harness/checkpoint.hpp"
#include "sparserl/harness/config.hpp"
#include "sparserl/harness/evaluation.hpp"
#include "sparserl/harness/run_log.hpp"
#include "sparserl/harness/trainer.hpp"
#include "sparserl/pruning/pruning.hpp"

using namespace sparserl;
using namespace sparserl::harness;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;  // 0: no runtime limit
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig config_file(const std::string& name, std::uint64_t seed) {
  auto cfg = load_config(std::string(SPARSERL_CONFIG_DIR) + "/" + name);
  cfg.seed = seed;
  return cfg;
}

std::uint64_t hash_params(const nn::NetworkParams& p, std::uint64_t h = 1469598103934665603ULL) {
  auto mix = [&](const std::vector<double>& v) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(v.data());
    for (std::size_t i = 0; i < v.size() * sizeof(double); ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    mix(p.weights[l]);
    mix(p.biases[l]);
  }
  return h;
}

// 1. backward vs central finite differences on random networks.
Outcome gradient_oracle() {
  RngStream rng(101, "acceptance/gradient");
  double worst = 0.0;
  std::size_t compared = 0, skipped = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = oracle::random_network(rng, 3, 8);
    const auto m = oracle::random_mask(p, rng, 0.8);
    const std::size_t batch = 1 + rng.uniform_index(6);
    const std::size_t in = p.input_width();
    std::vector<double> xs(batch * in), ys(batch);
    for (double& x : xs) x = rng.normal();
    for (double& y : ys) y = rng.normal();
    std::vector<std::size_t> actions(batch);
    for (auto& a : actions) a = rng.uniform_index(p.output_width());
    const auto lg = nn::td_backward(p, m, xs, actions, ys);
    const auto cmp = oracle::compare_with_finite_differences(
        p, lg.gradient,
        [&](const nn::NetworkParams& q) { return oracle::naive_td_loss(q, m, xs, actions, ys); },
        [&](const nn::NetworkParams& q) {
          std::vector<double> z;
          for (std::size_t b = 0; b < batch; ++b) {
            const std::vector<double> x(xs.begin() + static_cast<std::ptrdiff_t>(b * in),
                                        xs.begin() + static_cast<std::ptrdiff_t>((b + 1) * in));
            const auto pre = oracle::naive_forward(q, m, x).preactivations;
            z.insert(z.end(), pre.begin(), pre.end());
          }
          return z;
        });
    worst = std::max(worst, cmp.max_relative_error);
    compared += cmp.compared;
    skipped += cmp.skipped_kinks;
  }
  return {worst < 1e-4 && compared > 0,
          fmt("max relative error %.3g over %zu coordinates (%zu at ReLU kinks skipped)", worst,
              compared, skipped)};
}

// 2. EauDeDQN with K = 1, U_max = 0 reduces to DQN.
Outcome reduction() {
  struct Tracker : TrainingObserver {
    std::vector<std::uint64_t> hashes;
    void on_gradient_step(std::int64_t, const TrainerState& s) override {
      hashes.push_back(hash_params(s.population.members[0].params,
                                   hash_params(s.population.target_params)));
    }
  };
  auto dqn = preset(Algorithm::dqn, envs::EnvId::chain);
  dqn.total_steps = 5000;
  dqn.seed = 7;
  dqn.norm_random = 0.0;
  dqn.norm_reference = 1.0;
  auto eaude = dqn;
  eaude.algorithm = Algorithm::eaude_dqn;
  eaude.population_size = 1;
  eaude.tournament_size = 1;
  eaude.u_max = 0.0;

  Tracker a, b;
  Trainer ta(dqn), tb(eaude);
  ta.set_observer(&a);
  tb.set_observer(&b);
  ta.run();
  tb.run();
  const bool params = a.hashes == b.hashes && !a.hashes.empty() &&
                      ta.state().population.members[0].params == tb.state().population.members[0].params;
  const bool logs = to_csv(ta.log()) == to_csv(tb.log());
  return {params && logs, fmt("%zu gradient steps compared, parameters %s, CSV logs %s",
                              a.hashes.size(), params ? "identical" : "differ",
                              logs ? "identical" : "differ")};
}

// 3. DistillQN and PolyPruneQN with pruning period = T produce the same masks.
Outcome distill_equivalence() {
  struct Masks : TrainingObserver {
    EventKind kind;
    std::vector<std::int64_t> steps;
    std::vector<pruning::Mask> masks;
    explicit Masks(EventKind k) : kind(k) {}
    void on_event(const TrainingEvent& e) override {
      if (e.kind != kind) return;
      steps.push_back(e.step);
      masks.push_back(e.population_after.members[0].mask);
    }
  };
  auto poly = preset(Algorithm::polyprune_dqn, envs::EnvId::chain);
  poly.seed = 11;
  poly.warmup = 100;
  poly.poly_period = poly.target_period;
  poly.norm_random = 0.0;
  poly.norm_reference = 1.0;
  auto distill = poly;
  distill.algorithm = Algorithm::distill_dqn;

  Masks mp(EventKind::prune), md(EventKind::target_update);
  Trainer tp(poly), td(distill);
  tp.set_observer(&mp);
  td.set_observer(&md);
  tp.run();
  td.run();
  std::size_t equal = 0;
  for (std::size_t i = 0; i < std::min(mp.masks.size(), md.masks.size()); ++i) {
    if (mp.steps[i] == md.steps[i] && mp.masks[i] == md.masks[i]) ++equal;
  }
  const double final_sparsity = pruning::sparsity_of(md.masks.empty() ? pruning::Mask{} : md.masks.back());
  return {mp.masks.size() == 40 && md.masks.size() == 40 && equal == 40,
          fmt("%zu / %zu events with identical masks (final sparsity %.4f)", equal,
              mp.masks.size(), final_sparsity)};
}

// 4. Polynomial schedule exactness.
Outcome schedule_exactness() {
  pruning::PolyPruneConfig c;
  c.final_sparsity = 0.95;
  c.exponent = 3.0;
  c.t_start = 2000;
  c.t_end = 8000;
  c.t_final = 10000;
  bool ok = true;
  double prev = 0.0;
  for (std::int64_t t = 0; t < 10000; ++t) {
    const double s = pruning::poly_schedule(t, c);
    if (t <= c.t_start && s != 0.0) ok = false;
    if (t >= c.t_end && s != 0.95) ok = false;
    if (s < prev) ok = false;
    prev = s;
  }
  pruning::PolyPruneConfig hand = c;
  hand.t_start = 20;
  hand.t_end = 80;
  hand.t_final = 100;
  const double mid = pruning::poly_schedule(50, hand);
  const bool hand_ok = std::abs(mid - 0.83125) < 1e-12;
  return {ok && hand_ok, fmt("grid of 10000 points %s; midpoint value %.15f", ok ? "ok" : "violated", mid)};
}

// 5. Sampler bounds and the uniform law before the cap.
Outcome sampler_bounds() {
  RngStream rng(105, "acceptance/sampler");
  pruning::EauDeConfig cfg;
  cfg.t_final = 1000000;
  std::size_t violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double s = rng.uniform(0.0, 0.9999);
    const auto t = static_cast<std::int64_t>(rng.uniform_index(999999));
    const auto t_next =
        t + 1 + static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(cfg.t_final - t)));
    const double out = pruning::sample_sparsity(s, t, t_next, cfg, rng);
    if (!(out >= s && out <= s + (1.0 - s) * cfg.s_max && out < 1.0)) ++violations;
  }
  // Fixed inputs with the cap inactive: increments ~ Uniform(0, linear * u_max).
  const double s = 0.4;
  const std::int64_t t = 200000, t_next = 201000;
  const double linear = (1.0 - s) / static_cast<double>(cfg.t_final - t) * static_cast<double>(t_next - t);
  const double width = linear * cfg.u_max;
  std::vector<double> inc;
  for (int i = 0; i < 10000; ++i) inc.push_back(pruning::sample_sparsity(s, t, t_next, cfg, rng) - s);
  const double d = oracle::ks_statistic(inc, [&](double x) { return std::clamp(x / width, 0.0, 1.0); });
  const double crit = oracle::ks_critical_001(inc.size());
  const bool cap_inactive = width < (1.0 - s) * cfg.s_max;
  return {violations == 0 && cap_inactive && d < crit,
          fmt("%zu bound violations in 10000 draws; KS D = %.4f vs critical %.4f", violations, d, crit)};
}

// Shared full EauDeDQN run for criteria 6 and 7.
struct EventLog : TrainingObserver {
  std::vector<TrainingEvent> events;
  std::vector<std::pair<std::int64_t, std::vector<std::pair<std::int64_t, double>>>> step_sparsity;
  void on_event(const TrainingEvent& e) override { events.push_back(e); }
  void on_gradient_step(std::int64_t step, const TrainerState& s) override {
    std::vector<std::pair<std::int64_t, double>> v;
    for (const auto& m : s.population.members) v.emplace_back(m.lineage_id, m.sparsity);
    step_sparsity.emplace_back(step, std::move(v));
  }
};

const EventLog& full_eaude_run() {
  static EventLog log = [] {
    EventLog l;
    auto cfg = config_file("chain_eaude_dqn.cfg", 21);
    Trainer trainer(cfg);
    trainer.set_observer(&l);
    trainer.run();
    return l;
  }();
  return log;
}

// 6. Selection mechanics.
Outcome selection_mechanics() {
  RngStream rng(106, "acceptance/selection");
  std::size_t argmin_errors = 0, exploit_errors = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> l(1 + rng.uniform_index(10));
    for (double& v : l) v = std::floor(rng.uniform(0.0, 5.0));  // frequent ties
    std::size_t brute = 0;
    for (std::size_t k = 0; k < l.size(); ++k) {
      bool lowest = true;
      for (std::size_t j = 0; j < l.size(); ++j) {
        if (l[j] < l[k] || (l[j] == l[k] && j < k)) lowest = false;
      }
      if (lowest) brute = k;
    }
    const std::size_t psi = agents::select_target(l);
    if (psi != brute) ++argmin_errors;
    const auto sel = agents::exploitation(l, psi, l.size(), rng);
    if (sel != std::vector<std::size_t>(l.size(), psi)) ++exploit_errors;
  }
  const auto& run = full_eaude_run();
  std::size_t preserved = 0;
  for (const auto& e : run.events) {
    agents::Member champ = e.population_before.members.at(e.champion);
    const auto& slot = e.population_after.members.at(0);
    // Only the cumulated loss is reset.
    champ.cumulated_loss = 0.0;
    if (slot == champ && e.population_after.target_params == e.population_before.members[e.champion].params &&
        e.population_after.target_mask == e.population_before.members[e.champion].mask) {
      ++preserved;
    }
  }
  return {argmin_errors == 0 && exploit_errors == 0 && preserved == run.events.size() && !run.events.empty(),
          fmt("argmin mismatches %zu/1000, M=K exploitation mismatches %zu/1000, champion preserved "
              "at %zu/%zu events",
              argmin_errors, exploit_errors, preserved, run.events.size())};
}

// 7. Per-lineage sparsity is monotone; losses are zero after each target update.
Outcome lineage_monotonicity() {
  const auto& run = full_eaude_run();
  std::map<std::int64_t, double> level;
  std::size_t decreases = 0, nonzero_losses = 0, duplicates = 0;
  auto observe = [&](std::int64_t id, double s) {
    auto it = level.find(id);
    if (it != level.end() && s < it->second) ++decreases;
    level[id] = s;
  };
  std::size_t gi = 0;
  for (const auto& e : run.events) {
    for (; gi < run.step_sparsity.size() && run.step_sparsity[gi].first <= e.step; ++gi) {
      for (const auto& [id, s] : run.step_sparsity[gi].second) observe(id, s);
    }
    for (std::size_t k = 0; k < e.population_after.size(); ++k) {
      const auto& m = e.population_after.members[k];
      if (e.duplicated[k]) {
        ++duplicates;
        // A fresh lineage starts from its parent's level.
        const double parent = level.at(e.source_lineage[k]);
        if (m.sparsity < parent) ++decreases;
      }
      observe(m.lineage_id, m.sparsity);
      if (m.cumulated_loss != 0.0) ++nonzero_losses;
    }
  }
  for (; gi < run.step_sparsity.size(); ++gi) {
    for (const auto& [id, s] : run.step_sparsity[gi].second) observe(id, s);
  }
  return {decreases == 0 && nonzero_losses == 0 && duplicates > 0,
          fmt("%zu lineages, %zu duplications over %zu events: %zu decreases, %zu non-zero losses "
              "after target updates",
              level.size(), duplicates, run.events.size(), decreases, nonzero_losses)};
}

// 8. Value-based learning on the chain.
Outcome value_based_learning() {
  envs::ChainEnv chain;
  int dqn_ok = 0, eaude_ok = 0, sparse_ok = 0;
  std::string sparsities;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Trainer dqn(config_file("chain_dqn.cfg", seed));
    dqn.run();
    if (greedy_disagreements(dqn.champion().params, dqn.champion().mask, chain) == 0) ++dqn_ok;

    Trainer eaude(config_file("chain_eaude_dqn.cfg", seed));
    eaude.run();
    const auto& c = eaude.champion();
    if (greedy_disagreements(c.params, c.mask, chain) == 0) ++eaude_ok;
    if (c.sparsity > 0.30) ++sparse_ok;
    sparsities += fmt("%s%.3f", seed == 1 ? "" : " ", c.sparsity);
  }
  // Both arms must clear the same ">= 4 of 5 seeds" bar.
  return {dqn_ok >= 4 && eaude_ok >= 4 && sparse_ok >= 4,
          fmt("DQN optimal on %d/5 seeds, EauDeDQN optimal on %d/5, champion sparsity > 0.30 on "
              "%d/5 [%s]",
              dqn_ok, eaude_ok, sparse_ok, sparsities.c_str())};
}

// 9. Actor-critic learning on pendulum.
Outcome actor_critic_learning() {
  int ok = 0;
  std::string detail;
  double random_baseline = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Trainer trainer(config_file("pendulum_eaude_sac.cfg", seed));
    trainer.run();
    random_baseline = trainer.config().norm_random;
    const double ret = trainer.log().records.back().eval_return;
    const auto& twin = trainer.state().sac.twin;
    const double s1 = twin.critics[0].members[twin.critics[0].champion].sparsity;
    const double s2 = twin.critics[1].members[twin.critics[1].champion].sparsity;
    if (ret >= -300.0 && s1 > 0.20 && s2 > 0.20) ++ok;
    detail += fmt("%s(%.0f, %.3f/%.3f)", seed == 1 ? "" : " ", ret, s1, s2);
  }
  return {ok >= 3, fmt("%d/5 seeds with eval return >= -300 and both champion critics > 0.20 "
                       "sparse; random policy %.0f; (return, sparsity c1/c2): %s",
                       ok, random_baseline, detail.c_str())};
}

// 10. IQM exactness and bootstrap collapse.
Outcome iqm_aggregation() {
  RngStream rng(110, "acceptance/iqm");
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(1 + rng.uniform_index(50));
    for (double& x : v) x = rng.normal() * 100.0;
    if (iqm(v) != oracle::brute_force_iqm(v)) ++mismatches;
  }
  RunLog log{3, false, {}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::int64_t t = 100; t <= 500; t += 100) {
    const double r = rng.uniform();
    log.append({t, 0.0, r, nan, {1}, {2}, {0.1, rng.uniform(), 0.3}, {0.0, 0.0, 0.0}});
  }
  const auto table = parse_csv(to_csv(log));
  const auto rows = aggregate_runs(std::vector<CsvTable>(5, table),
                                   std::vector<envs::NormalizationBaselines>(5, {0.0, 1.0}), {});
  double width = 0.0;
  for (const auto& r : rows) {
    width = std::max({width, r.return_ci.high - r.return_ci.low, r.sparsity_ci.high - r.sparsity_ci.low});
  }
  return {mismatches == 0 && width == 0.0,
          fmt("%zu/1000 IQM mismatches; widest identical-runs interval %.3g", mismatches, width)};
}

// 11. Checkpoint round trip, resume-equals-continue, thread-count independence.
Outcome persistence() {
  std::vector<std::string> problems;
  for (auto algo : {Algorithm::eaude_dqn, Algorithm::eaude_sac}) {
    auto cfg = algo == Algorithm::eaude_sac ? config_file("pendulum_eaude_sac.cfg", 5)
                                            : config_file("chain_eaude_dqn.cfg", 5);
    cfg.total_steps = 2000;
    cfg.warmup = 200;
    cfg.eval_period = 500;
    cfg.norm_random = -1.0;
    cfg.norm_reference = 1.0;
    const std::string tag = to_string(algo);

    Trainer full(cfg);
    full.run();
    const auto state = full.snapshot();
    const auto bytes = encode_checkpoint(cfg, state);
    const auto back = decode_checkpoint(bytes);
    if (!(back.state == state) || !(back.config == cfg) || encode_checkpoint(back.config, back.state) != bytes) {
      problems.push_back(tag + " round trip");
    }

    Trainer first(cfg);
    first.run_until(1000);
    Trainer second = resume_trainer(cfg, decode_checkpoint(encode_checkpoint(cfg, first.snapshot())));
    second.run();
    if (to_csv(second.log()) != to_csv(full.log()) || !(second.snapshot() == state)) {
      problems.push_back(tag + " resume");
    }

    auto threaded = cfg;
    threaded.threads = 4;
    Trainer tt(threaded);
    tt.run();
    if (to_csv(tt.log()) != to_csv(full.log())) problems.push_back(tag + " threads");
  }
  std::string detail = "round trip, resume at 1000 of 2000, 1 vs 4 threads for eaude_dqn and eaude_sac";
  for (const auto& p : problems) detail += "; FAILED " + p;
  return {problems.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "gradient oracle", 10.0, gradient_oracle},
      {2, "K=1 reduction to DQN", 30.0, reduction},
      {3, "DistillQN / PolyPruneQN equivalence", 60.0, distill_equivalence},
      {4, "schedule exactness", 0.0, schedule_exactness},
      {5, "sampler bounds", 10.0, sampler_bounds},
      {6, "selection mechanics", 0.0, selection_mechanics},
      {7, "lineage monotonicity", 0.0, lineage_monotonicity},
      {8, "value-based learning", 300.0, value_based_learning},
      {9, "actor-critic learning", 900.0, actor_critic_learning},
      {10, "IQM and aggregation", 0.0, iqm_aggregation},
      {11, "persistence and determinism", 0.0, persistence},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = out.pass;
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      pass = false;
      out.detail += fmt("; over the %.0f s budget", c.budget_s);
    }
    if (!pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
