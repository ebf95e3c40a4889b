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

#include "sparserl/harness/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sparserl/common/errors.hpp"
#include "sparserl/common/rng.hpp"
#include "sparserl/harness/config.hpp"

namespace sparserl::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Linear interpolation between order statistics.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<std::size_t> split_indices(const std::string& cell) {
  std::vector<std::size_t> out;
  std::stringstream ss(cell);
  std::string part;
  while (std::getline(ss, part, '/')) out.push_back(static_cast<std::size_t>(std::stoull(part)));
  return out;
}

std::string schema_difference(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::string diff;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::string x = i < a.size() ? a[i] : "<missing>";
    const std::string y = i < b.size() ? b[i] : "<missing>";
    if (x != y) diff += (diff.empty() ? "" : ", ") + ("column " + std::to_string(i) + ": " + x + " vs " + y);
  }
  return diff;
}

}  // namespace

double iqm(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("iqm of an empty sequence");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t cut = v.size() / 4;
  double sum = 0.0;
  for (std::size_t i = cut; i < v.size() - cut; ++i) sum += v[i];
  return sum / static_cast<double>(v.size() - 2 * cut);
}

Interval bootstrap_iqm(std::span<const double> values, std::size_t resamples, std::uint64_t seed,
                       double confidence) {
  if (values.empty()) throw ArgumentError("bootstrap of an empty sequence");
  if (resamples == 0) throw ArgumentError("bootstrap needs at least one resample");
  RngStream rng(seed, "bootstrap");
  std::vector<double> stats(resamples);
  std::vector<double> sample(values.size());
  for (auto& s : stats) {
    for (double& x : sample) x = values[rng.uniform_index(values.size())];
    s = iqm(sample);
  }
  std::sort(stats.begin(), stats.end());
  const double tail = 0.5 * (1.0 - confidence);
  return {quantile_sorted(stats, tail), quantile_sorted(stats, 1.0 - tail)};
}

double champion_sparsity(const CsvTable& table, std::size_t row) {
  const auto& cells = table.rows.at(row);
  const auto champions = split_indices(cells.at(table.column("champion_index")));
  if (champions.size() == 1) {
    return parse_real(cells.at(table.column("sparsity_" + std::to_string(champions[0]))));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < champions.size(); ++i) {
    const std::string name = "c" + std::to_string(i + 1) + "_sparsity_" + std::to_string(champions[i]);
    sum += parse_real(cells.at(table.column(name)));
  }
  return sum / static_cast<double>(champions.size());
}

std::vector<AggregateRow> aggregate_runs(const std::vector<CsvTable>& logs,
                                         const std::vector<envs::NormalizationBaselines>& baselines,
                                         const AggregateOptions& options) {
  if (logs.empty()) throw ArgumentError("aggregate_runs needs at least one run");
  if (baselines.size() != logs.size()) throw ArgumentError("one baseline per run is required");
  for (std::size_t r = 1; r < logs.size(); ++r) {
    if (logs[r].header != logs[0].header) {
      throw ConfigError("run " + std::to_string(r) + " has a different schema: " +
                        schema_difference(logs[0].header, logs[r].header));
    }
    if (logs[r].rows.size() != logs[0].rows.size()) {
      throw ConfigError("run " + std::to_string(r) + " has " + std::to_string(logs[r].rows.size()) +
                        " records, run 0 has " + std::to_string(logs[0].rows.size()));
    }
  }
  const std::size_t step_col = logs[0].column("step");
  const std::size_t ret_col =
      logs[0].column(options.metric == ReturnColumn::episode ? "episode_return" : "eval_return");

  std::vector<AggregateRow> out;
  for (std::size_t row = 0; row < logs[0].rows.size(); ++row) {
    AggregateRow agg;
    agg.step = std::stoll(logs[0].rows[row][step_col]);
    std::vector<double> returns;
    std::vector<double> sparsities;
    for (std::size_t r = 0; r < logs.size(); ++r) {
      if (std::stoll(logs[r].rows[row][step_col]) != agg.step) {
        throw ConfigError("run " + std::to_string(r) + " logs step " + logs[r].rows[row][step_col] +
                          " where run 0 logs " + std::to_string(agg.step));
      }
      const double raw = parse_real(logs[r].rows[row][ret_col]);
      if (std::isfinite(raw)) returns.push_back(envs::normalized_return(raw, baselines[r]));
      sparsities.push_back(champion_sparsity(logs[r], row));
    }
    agg.runs = returns.size();
    if (returns.empty()) {
      agg.return_iqm = kNaN;
      agg.return_ci = {kNaN, kNaN};
    } else {
      agg.return_iqm = iqm(returns);
      agg.return_ci = bootstrap_iqm(returns, options.resamples, options.seed);
    }
    agg.sparsity_iqm = iqm(sparsities);
    agg.sparsity_ci = bootstrap_iqm(sparsities, options.resamples, options.seed);
    agg.sparsity_min = *std::min_element(sparsities.begin(), sparsities.end());
    agg.sparsity_max = *std::max_element(sparsities.begin(), sparsities.end());
    out.push_back(agg);
  }
  return out;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::string out =
      "step,runs,return_iqm,return_ci_low,return_ci_high,sparsity_iqm,sparsity_ci_low,"
      "sparsity_ci_high,sparsity_min,sparsity_max\n";
  for (const auto& r : rows) {
    out += std::to_string(r.step) + ',' + std::to_string(r.runs) + ',' + format_real(r.return_iqm) +
           ',' + format_real(r.return_ci.low) + ',' + format_real(r.return_ci.high) + ',' +
           format_real(r.sparsity_iqm) + ',' + format_real(r.sparsity_ci.low) + ',' +
           format_real(r.sparsity_ci.high) + ',' + format_real(r.sparsity_min) + ',' +
           format_real(r.sparsity_max) + '\n';
  }
  return out;
}

std::vector<AggregateRow> aggregate_directory(const std::filesystem::path& runs,
                                              const AggregateOptions& options) {
  std::vector<std::filesystem::path> dirs;
  for (const auto& entry : std::filesystem::directory_iterator(runs)) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "log.csv")) {
      dirs.push_back(entry.path());
    }
  }
  if (dirs.empty()) throw ConfigError("no run directories with log.csv under " + runs.string());
  std::sort(dirs.begin(), dirs.end());
  std::vector<CsvTable> logs;
  std::vector<envs::NormalizationBaselines> baselines;
  for (const auto& d : dirs) {
    logs.push_back(read_csv(d / "log.csv"));
    const auto cfg = load_config(d / "config.txt");
    if (std::isnan(cfg.norm_random) || std::isnan(cfg.norm_reference)) {
      throw ConfigError(d.string() + "/config.txt lacks resolved normalization baselines");
    }
    baselines.push_back({cfg.norm_random, cfg.norm_reference});
  }
  return aggregate_runs(logs, baselines, options);
}

}  // namespace sparserl::harness
