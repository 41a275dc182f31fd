// Copyright 2026 The qslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qsl/expcli/config.hpp"
#include "qsl/expcli/svg.hpp"
#include "qsl/expcli/table.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qsl::expcli {

// One inequality or trend check. `value` is the worst violation in the
// check's own units (lhs - rhs for inequalities); it passes when
// value <= tolerance. NaN never passes.
struct Check {
  std::string name;
  double value;
  double tolerance;
  bool passed() const { return value <= tolerance; }
};

struct Artifact {
  std::string name;  // file stem
  Table table;
  std::optional<Chart> chart;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<Check> checks;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
  std::vector<Artifact> artifacts;

  bool all_passed() const;
  const Check& check(const std::string& name) const;
  double metric(const std::string& key) const;
  const Artifact& artifact(const std::string& name) const;
  std::string summary() const;
};

// Runs the experiment in memory; no files are touched.
ExperimentResult compute(const Resolved& config);

struct RunReport {
  ExperimentResult result;
  std::vector<std::filesystem::path> written;
};

// Resolves, computes and writes config.txt, summary.txt and (when every check
// passes) the CSV/SVG artifacts into config.out. On a failed check only the
// summary with its violation report is written.
RunReport run(const RunConfig& config);

// Process exit status for a finished run: 0 when all checks pass, 3 otherwise.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitViolation = 3;
int exit_status(const RunReport& report);

// Least-squares slope of ln y against ln x (any number of points >= 2).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qsl::expcli
