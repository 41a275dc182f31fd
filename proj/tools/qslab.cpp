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

#include "qsl/errors.hpp"
#include "qsl/expcli/config.hpp"
#include "qsl/expcli/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <utility>
#include <vector>

using namespace qsl::expcli;

int main(int argc, char** argv) {
  CLI::App app{"qslab: quantum speed limit experiments"};
  app.set_help_flag("-h,--help", "Print this help message and exit");

  std::string experiment, config_path;
  // (flag, config key) in the order they are applied on top of the config file
  std::vector<std::pair<std::string, std::string>> overrides;
  std::string n, t_final, steps, seed, seeds, out, emit, coupling, h_field, protocol, model;

  std::string names;
  for (const auto& e : experiment_names()) names += (names.empty() ? "" : ", ") + e;
  app.add_option("experiment", experiment, "Experiment id: " + names);
  app.add_option("--config", config_path, "key = value run-config file");
  app.add_option("--model", model, "custom runs: two-level, tfim or quench");
  app.add_option("--N", n, "system size (sites or spins)");
  app.add_option("--T", t_final, "annealing time / final time");
  app.add_option("--steps", steps, "grid points per unit time");
  app.add_option("--seed", seed, "seed for randomized protocols");
  app.add_option("--seeds", seeds, "number of random protocols (fig1-scatter)");
  app.add_option("--out", out, "output directory");
  app.add_option("--emit", emit, "csv, svg or both");
  app.add_option("--J", coupling, "quench coupling J");
  app.add_option("--h-field", h_field, "field strength h");
  app.add_option("--protocol", protocol, "linear, boundary_flat, boundary_steep, random or random:<seed>[:<knots>]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
    const std::pair<const char*, const std::string*> flags[] = {
        {"experiment", &experiment}, {"model", &model}, {"N", &n},         {"T", &t_final},
        {"steps", &steps},           {"seed", &seed},   {"seeds", &seeds}, {"out", &out},
        {"emit", &emit},             {"J", &coupling},  {"h-field", &h_field}, {"protocol", &protocol}};
    for (const auto& [key, value] : flags)
      if (!value->empty()) set_field(config, key, *value);
    (void)resolve(config);
  } catch (const qsl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const RunReport report = run(config);
    std::cout << report.result.summary();
    for (const auto& path : report.written) std::cout << "wrote " << path.string() << "\n";
    return exit_status(report);
  } catch (const qsl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
