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

#include "sparserl/harness/run_log.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sparserl/common/errors.hpp"

namespace sparserl::harness {

namespace {

bool same_real(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool same_reals(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_real(a[i], b[i])) return false;
  }
  return true;
}

std::string join_indices(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "/" : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

bool RunRecord::operator==(const RunRecord& o) const {
  return step == o.step && same_real(wallclock_s, o.wallclock_s) &&
         same_real(episode_return, o.episode_return) && same_real(eval_return, o.eval_return) &&
         champion == o.champion && behavior == o.behavior && same_reals(sparsity, o.sparsity) &&
         same_reals(loss, o.loss);
}

void RunLog::append(RunRecord r) {
  if (!records.empty() && r.step <= records.back().step) {
    throw std::logic_error("run log steps must strictly increase");
  }
  const std::size_t width = population * (twin ? 2 : 1);
  if (r.sparsity.size() != width || r.loss.size() != width) {
    throw std::logic_error("run log record has the wrong member count");
  }
  records.push_back(std::move(r));
}

std::vector<std::string> RunLog::header() const {
  std::vector<std::string> h = {"step",           "wallclock_s",    "episode_return",
                                "eval_return",    "champion_index", "behavior_index"};
  const std::vector<std::string> prefixes = twin ? std::vector<std::string>{"c1_", "c2_"}
                                                 : std::vector<std::string>{""};
  for (const char* kind : {"sparsity_", "loss_"}) {
    for (const auto& p : prefixes) {
      for (std::size_t k = 0; k < population; ++k) h.push_back(p + kind + std::to_string(k));
    }
  }
  return h;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string to_csv(const RunLog& log) {
  std::string out;
  const auto header = log.header();
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& r : log.records) {
    out += std::to_string(r.step) + ',' + format_real(r.wallclock_s) + ',' +
           format_real(r.episode_return) + ',' + format_real(r.eval_return) + ',' +
           join_indices(r.champion) + ',' + join_indices(r.behavior);
    for (double s : r.sparsity) out += ',' + format_real(s);
    for (double l : r.loss) out += ',' + format_real(l);
    out += '\n';
  }
  return out;
}

void write_csv(const RunLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_csv(log);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("CSV has no column '" + name + "'");
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      t.header = std::move(cells);
      first = false;
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw ConfigError("CSV row " + std::to_string(t.rows.size() + 1) + " has " +
                        std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (first) throw ConfigError("CSV is empty");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

double parse_real(const std::string& cell) {
  if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto r = std::from_chars(cell.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("not a number: '" + cell + "'");
  return v;
}

}  // namespace sparserl::harness
