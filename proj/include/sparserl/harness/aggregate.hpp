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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sparserl/envs/environment.hpp"
#include "sparserl/harness/run_log.hpp"

namespace sparserl::harness {

// Interquartile mean: drop floor(n / 4) values from each end of the sorted
// sequence and average the rest. Throws ArgumentError when empty.
double iqm(std::span<const double> values);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Percentile bootstrap of the IQM over `resamples` resamples with
// replacement, 95% by default.
Interval bootstrap_iqm(std::span<const double> values, std::size_t resamples, std::uint64_t seed,
                       double confidence = 0.95);

enum class ReturnColumn { episode, eval };

struct AggregateOptions {
  ReturnColumn metric = ReturnColumn::episode;
  std::size_t resamples = 2000;
  std::uint64_t seed = 0;
};

struct AggregateRow {
  std::int64_t step = 0;
  std::size_t runs = 0;  // runs with a finite return at this step
  double return_iqm = 0.0;
  Interval return_ci;
  double sparsity_iqm = 0.0;
  Interval sparsity_ci;
  double sparsity_min = 0.0;
  double sparsity_max = 0.0;
};

// One baseline per run, in the same order as `logs`.
std::vector<AggregateRow> aggregate_runs(const std::vector<CsvTable>& logs,
                                         const std::vector<envs::NormalizationBaselines>& baselines,
                                         const AggregateOptions& options);

// Champion sparsity of one CSV row (mean over critics for SAC logs).
double champion_sparsity(const CsvTable& table, std::size_t row);

std::string aggregate_csv(const std::vector<AggregateRow>& rows);

// Reads every run directory under `runs` (each holding log.csv and
// config.txt) and writes the summary table.
std::vector<AggregateRow> aggregate_directory(const std::filesystem::path& runs,
                                              const AggregateOptions& options);

}  // namespace sparserl::harness
