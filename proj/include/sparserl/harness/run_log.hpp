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
#include <string>
#include <vector>

namespace sparserl::harness {

// One logging event. For SAC runs the per-member vectors hold critic 1
// followed by critic 2, and champion/behavior carry one index per critic.
struct RunRecord {
  std::int64_t step = 0;
  double wallclock_s = 0.0;
  double episode_return = 0.0;  // NaN before the first finished episode
  double eval_return = 0.0;     // NaN when no evaluation ran at this step
  std::vector<std::size_t> champion;
  std::vector<std::size_t> behavior;
  std::vector<double> sparsity;
  std::vector<double> loss;

  bool operator==(const RunRecord& other) const;
};

struct RunLog {
  std::size_t population = 1;
  bool twin = false;  // SAC layout
  std::vector<RunRecord> records;

  // Throws std::logic_error if `r.step` does not increase or widths differ.
  void append(RunRecord r);
  std::vector<std::string> header() const;
  bool operator==(const RunLog&) const = default;
};

std::string format_real(double v);
std::string to_csv(const RunLog& log);
void write_csv(const RunLog& log, const std::filesystem::path& path);

// Parsed CSV: header plus numeric cells. champion/behavior columns keep their
// text form ("2" or "1/3").
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws ConfigError
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text);
double parse_real(const std::string& cell);

}  // namespace sparserl::harness
