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

#include "qsl/expcli/config.hpp"

#include "qsl/errors.hpp"
#include "qsl/expcli/table.hpp"
#include "qsl/schedules.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

namespace qsl::expcli {

namespace {

constexpr std::array<std::pair<Experiment, const char*>, 9> kExperiments{{
    {Experiment::fig1_traces, "fig1-traces"},
    {Experiment::fig1_scatter, "fig1-scatter"},
    {Experiment::fig1_tsweep, "fig1-tsweep"},
    {Experiment::fig2_trace, "fig2-trace"},
    {Experiment::fig2_scaling, "fig2-scaling"},
    {Experiment::fig2_protocols, "fig2-protocols"},
    {Experiment::fig2_tsweep, "fig2-tsweep"},
    {Experiment::fig3_quench, "fig3-quench"},
    {Experiment::custom, "custom"},
}};

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw ConfigError("config field '" + key + "': " + why);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& text) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    bad(key, "expected a finite number, got '" + text + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    bad(key, "expected a nonnegative integer, got '" + text + "'");
  return v;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_sweep_over_t(Experiment e) { return e == Experiment::fig1_tsweep || e == Experiment::fig2_tsweep; }

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [id, name] : kExperiments)
    if (id == e) return name;
  return "custom";
}

Experiment parse_experiment(const std::string& text) {
  for (const auto& [id, name] : kExperiments)
    if (text == name) return id;
  std::string known;
  for (const auto& [id, name] : kExperiments) known += std::string(known.empty() ? "" : ", ") + name;
  bad("experiment", "unknown experiment '" + text + "' (known: " + known + ")");
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& [id, name] : kExperiments) out.emplace_back(name);
  return out;
}

std::string to_string(Model m) {
  switch (m) {
    case Model::two_level: return "two-level";
    case Model::tfim: return "tfim";
    case Model::quench: return "quench";
  }
  return "two-level";
}

void set_field(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (value.empty()) bad(key, "empty value");
  if (key == "experiment") {
    c.experiment = parse_experiment(value);
  } else if (key == "model") {
    if (value == "two-level") c.model = Model::two_level;
    else if (value == "tfim") c.model = Model::tfim;
    else if (value == "quench") c.model = Model::quench;
    else bad(key, "expected two-level, tfim or quench, got '" + value + "'");
  } else if (key == "N") {
    c.n = static_cast<std::size_t>(to_unsigned(key, value));
  } else if (key == "T") {
    c.t_final = to_real(key, value);
  } else if (key == "steps") {
    c.steps = to_real(key, value);
  } else if (key == "seed") {
    c.seed = to_unsigned(key, value);
  } else if (key == "seeds") {
    c.seeds = static_cast<std::size_t>(to_unsigned(key, value));
  } else if (key == "J") {
    c.coupling = to_real(key, value);
  } else if (key == "h-field") {
    c.h_field = to_real(key, value);
  } else if (key == "protocol") {
    c.protocol = value;
  } else if (key == "out") {
    c.out = value;
  } else if (key == "emit") {
    if (value == "csv") c.emit = {true, false};
    else if (value == "svg") c.emit = {false, true};
    else if (value == "both") c.emit = {true, true};
    else bad(key, "expected csv, svg or both, got '" + value + "'");
  } else {
    bad(key, "unknown key");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "config line " << lineno << ": expected 'key = value', got '" << line << "'";
      throw ConfigError(os.str());
    }
    set_field(c, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config(read_file(path));
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
}

std::string format_config(const RunConfig& c) {
  std::string out = "experiment = " + to_string(c.experiment) + "\n";
  if (c.model) out += "model = " + to_string(*c.model) + "\n";
  if (c.n) out += "N = " + std::to_string(*c.n) + "\n";
  if (c.t_final) out += "T = " + number(*c.t_final) + "\n";
  if (c.steps) out += "steps = " + number(*c.steps) + "\n";
  if (c.seed) out += "seed = " + std::to_string(*c.seed) + "\n";
  if (c.seeds) out += "seeds = " + std::to_string(*c.seeds) + "\n";
  if (c.coupling) out += "J = " + number(*c.coupling) + "\n";
  if (c.h_field) out += "h-field = " + number(*c.h_field) + "\n";
  if (c.protocol) out += "protocol = " + *c.protocol + "\n";
  out += "out = " + c.out.string() + "\n";
  out += std::string("emit = ") + (c.emit.csv && c.emit.svg ? "both" : c.emit.svg ? "svg" : "csv") + "\n";
  return out;
}

Resolved resolve(const RunConfig& c) {
  Resolved r{};
  r.experiment = c.experiment;
  r.seed = c.seed.value_or(0);
  r.seeds = c.seeds.value_or(500);
  r.coupling = c.coupling.value_or(1.0);
  r.h_field = c.h_field.value_or(1.0);

  auto forbid = [&](bool set, const char* key) {
    if (set) bad(key, "fixed by the " + to_string(c.experiment) + " preset");
  };
  const std::vector<double> t_sweep{10, 30, 100, 300, 1000};

  switch (c.experiment) {
    case Experiment::fig1_traces:
    case Experiment::fig1_scatter:
    case Experiment::fig1_tsweep:
      r.model = Model::two_level;
      r.t_final = c.t_final.value_or(50.0);
      r.steps = c.steps.value_or(100.0);
      break;
    case Experiment::fig2_trace:
    case Experiment::fig2_scaling:
    case Experiment::fig2_protocols:
      r.model = Model::tfim;
      r.n = c.n.value_or(1000);
      r.t_final = c.t_final.value_or(1000.0);
      r.steps = c.steps.value_or(100.0);
      break;
    case Experiment::fig2_tsweep:
      r.model = Model::tfim;
      r.n = c.n.value_or(200);
      r.steps = c.steps.value_or(100.0);
      break;
    case Experiment::fig3_quench:
      r.model = Model::quench;
      r.n = c.n.value_or(2000);
      r.t_final = c.t_final.value_or(4.0);
      r.steps = c.steps.value_or(500.0);
      break;
    case Experiment::custom:
      if (!c.model) bad("model", "required for custom runs");
      r.model = *c.model;
      r.n = c.n.value_or(r.model == Model::quench ? 2000 : 1000);
      r.t_final = c.t_final.value_or(r.model == Model::two_level ? 50.0 : r.model == Model::tfim ? 1000.0 : 4.0);
      r.steps = c.steps.value_or(r.model == Model::quench ? 500.0 : 100.0);
      break;
  }
  if (c.model && c.experiment != Experiment::custom) bad("model", "only valid for custom runs");

  switch (c.experiment) {
    case Experiment::fig1_traces:
      r.protocols = c.protocol ? std::vector<std::string>{*c.protocol}
                               : std::vector<std::string>{"boundary_flat", "boundary_steep"};
      break;
    case Experiment::fig1_scatter:
      forbid(c.protocol.has_value(), "protocol");
      if (!c.seed) bad("seed", "required for randomized experiments");
      if (r.seeds == 0) bad("seeds", "must be positive");
      break;
    case Experiment::fig1_tsweep:
      forbid(c.t_final.has_value(), "T");
      r.protocols = {c.protocol.value_or("boundary_flat")};
      r.sweep = t_sweep;
      break;
    case Experiment::fig2_trace:
      r.protocols = {c.protocol.value_or("linear")};
      break;
    case Experiment::fig2_scaling:
      forbid(c.n.has_value(), "N");
      r.protocols = {c.protocol.value_or("linear")};
      r.sweep = {128, 182, 256, 362, 512, 724, 1024, 1448, 2048};
      break;
    case Experiment::fig2_protocols:
      r.protocols = c.protocol ? std::vector<std::string>{*c.protocol}
                               : std::vector<std::string>{"boundary_flat", "boundary_steep"};
      break;
    case Experiment::fig2_tsweep:
      forbid(c.t_final.has_value(), "T");
      r.protocols = {c.protocol.value_or("linear")};
      r.sweep = t_sweep;
      break;
    case Experiment::fig3_quench:
      forbid(c.protocol.has_value(), "protocol");
      break;
    case Experiment::custom:
      if (r.model == Model::quench) forbid(c.protocol.has_value(), "protocol");
      else r.protocols = {c.protocol.value_or("linear")};
      break;
  }

  if (!(r.steps > 0.0)) bad("steps", "must be positive");
  if (!is_sweep_over_t(c.experiment)) {
    if (!(r.t_final > 0.0)) bad("T", "must be positive");
    if (r.steps * r.t_final < 2.0) bad("steps", "grid needs at least 3 points (steps * T >= 2)");
  } else if (r.steps * r.sweep.front() < 2.0) {
    bad("steps", "grid needs at least 3 points for the shortest T");
  }
  if (r.model == Model::tfim && c.experiment != Experiment::fig2_scaling && (r.n < 2 || r.n % 2 != 0))
    bad("N", "must be an even integer >= 2 for the Ising chain");
  if (r.model == Model::quench && r.n < 1) bad("N", "must be positive");
  if (r.model == Model::two_level && !(r.h_field > 0.0)) bad("h-field", "must be positive");
  if (r.model == Model::two_level && c.coupling) bad("J", "not a two-level parameter");
  if (r.model == Model::tfim && (c.coupling || c.h_field)) bad(c.coupling ? "J" : "h-field", "not an Ising-chain parameter");
  for (std::string& p : r.protocols) {
    if (p == "random") {
      if (!c.seed) bad("seed", "required for the random protocol");
      p = "random:" + std::to_string(*c.seed);
    }
    try {
      (void)schedules::parse_schedule(p, 0.0, 1.0, 1.0);
    } catch (const UsageError& e) {
      bad("protocol", e.what());
    }
  }
  return r;
}

}  // namespace qsl::expcli
