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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qsl::expcli {

enum class Experiment {
  fig1_traces,
  fig1_scatter,
  fig1_tsweep,
  fig2_trace,
  fig2_scaling,
  fig2_protocols,
  fig2_tsweep,
  fig3_quench,
  custom
};

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& text);
std::vector<std::string> experiment_names();

enum class Model { two_level, tfim, quench };
std::string to_string(Model m);

struct EmitFlags {
  bool csv = true;
  bool svg = false;
};

// Unset fields fall back to the experiment's preset (see resolve()).
struct RunConfig {
  Experiment experiment = Experiment::custom;
  std::optional<Model> model;  // custom runs only
  std::optional<std::size_t> n;
  std::optional<double> t_final;
  std::optional<double> steps;  // grid points per unit time
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> seeds;  // number of random protocols
  std::optional<double> coupling;    // J
  std::optional<double> h_field;
  std::optional<std::string> protocol;
  std::filesystem::path out = "qslab_out";
  EmitFlags emit;
};

// Sets one field from its textual key (experiment, model, N, T, steps, seed,
// seeds, J, h-field, protocol, out, emit). Throws ConfigError naming the key.
void set_field(RunConfig& config, const std::string& key, const std::string& value);

// key = value lines; '#' starts a comment; blank lines ignored.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Canonical key = value rendering of the set fields.
std::string format_config(const RunConfig& config);

// Fully specified parameters after presets are applied.
struct Resolved {
  Experiment experiment;
  Model model;
  std::size_t n;
  double t_final;
  double steps;
  std::uint64_t seed;
  std::size_t seeds;
  double coupling;
  double h_field;
  std::vector<std::string> protocols;
  std::vector<double> sweep;  // T values or N values for sweep experiments
};

// Applies presets and validates; throws ConfigError with field-level messages.
Resolved resolve(const RunConfig& config);

}  // namespace qsl::expcli
