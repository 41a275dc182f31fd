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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include "qsl/bounds.hpp"
#include "qsl/dynamics.hpp"
#include "qsl/expcli/config.hpp"
#include "qsl/expcli/experiments.hpp"
#include "qsl/expcli/table.hpp"
#include "qsl/models.hpp"
#include "qsl/schedules.hpp"
#include "support/dense_tfim.hpp"
#include "support/random.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace qsl;
using expcli::RunConfig;
using expcli::RunReport;

constexpr double kTol = 1e-8;

struct Outcome {
  bool passed;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> body;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Worst check value and a pass flag over a run report.
Outcome checks_of(const RunReport& report) {
  bool ok = true;
  std::ostringstream os;
  for (const auto& c : report.result.checks) {
    if (!c.passed()) {
      ok = false;
      os << "failed: " << c.name << " (" << fmt("%.3e", c.value) << "); ";
    }
  }
  if (ok) os << report.result.checks.size() << " checks passed";
  return {ok, os.str()};
}

RunReport run_preset(const std::string& text, const fs::path& out) {
  RunConfig c = expcli::parse_config(text);
  c.out = out;
  return expcli::run(c);
}

Outcome mt_suite() {
  std::mt19937_64 rng(20240601);
  double worst = -1.0;
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::Index d = 2 + rep % 7;
    const double horizon = 3.0;
    const CMatrix h0 = testing::random_hermitian_matrix(d, rng);
    const CMatrix v = testing::random_hermitian_matrix(d, rng);
    const schedules::Schedule s = schedules::random_monotone(static_cast<std::uint64_t>(rep), horizon, 0.0, 1.0);
    const dynamics::HamiltonianFunction h(static_cast<std::size_t>(d), [h0, v, s](double t) {
      return qcore::HermitianOperator(CMatrix(h0 + s.value(t) * v));
    });
    const dynamics::TimeGrid grid(0.0, horizon, 6001);
    const dynamics::Trajectory traj = dynamics::propagate(h, testing::random_state(d, rng), grid);
    worst = std::max(worst, bounds::mt_bound(traj, h).violation());
  }
  return {worst < kTol, "max violation " + fmt("%.3e", worst) + " over 50 Hamiltonians, d in [2, 8]"};
}

Outcome two_level_identity() {
  double worst = 0.0;
  std::vector<std::string> protocols{"linear", "boundary_flat", "boundary_steep"};
  for (int seed = 1; seed <= 5; ++seed) protocols.push_back("random:" + std::to_string(seed));
  for (const auto& p : protocols) {
    const models::TwoLevelModel model(1.0, schedules::parse_schedule(p, 0.0, std::numbers::pi / 2, 50.0));
    const models::TwoLevelRun run = models::two_level_run(model, dynamics::TimeGrid(0.0, 50.0, 5001), {false});
    const auto& a = run.bounds.bound("dE2");
    const auto& b = run.bounds.bound("dE_inv");
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return {worst < kTol, "max |dE2 - dE_inv| " + fmt("%.3e", worst) + " over 8 protocols"};
}

Outcome tfim_oracle() {
  const double horizon = 50.0;
  const auto a = schedules::Schedule::linear(1.0, 0.0, horizon);
  const auto b = schedules::Schedule::linear(0.0, 1.0, horizon);
  const dynamics::TimeGrid grid(0.0, horizon, 5001);
  double worst = 0.0;
  for (std::size_t n : {4, 6}) {
    const models::TfimSeries s = models::tfim_run(models::TfimModel(n, a, b), grid);
    const testing::DenseTrace dense = testing::dense_tfim_trace(n, a, b, grid, 2);
    const auto nd = static_cast<double>(n);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, std::abs(std::exp(-nd * s.adiabatic.g[i]) - dense.fidelity[i]));
      worst = std::max(worst, std::abs(std::exp(-nd * s.g_loschmidt[i]) - dense.echo[i]));
    }
  }
  return {worst < kTol, "max overlap deviation " + fmt("%.3e", worst) + " (N = 4, 6)"};
}

Outcome quench_free_spins() {
  const models::QuenchModel m(2000, 0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i <= 140; ++i) {
    const double t = 0.01 * i;
    const models::QuenchPoint p = models::quench_point(m, t);
    const double exact = std::abs(std::tan(t));
    const double bound = std::abs(p.weak - models::quench_e0(m)) / 2000.0;
    worst = std::max({worst, std::abs(std::abs(p.g_dot) - exact), std::abs(bound - exact)});
  }
  return {worst < 1e-9, "max |bound - h tan(ht)|, ||g_dot| - h tan(ht)| " + fmt("%.3e", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  fs::path out = "acceptance_out";
  app.add_option("--out", out, "directory for experiment output");
  CLI11_PARSE(app, argc, argv);
  fs::remove_all(out);

  // Shared between criteria 6, 8 and 9.
  std::vector<std::pair<fs::path, fs::path>> replay;
  auto replayed = [&](const std::string& text, const std::string& tag) {
    const RunReport first = run_preset(text, out / tag);
    replay.emplace_back(out / tag, out / (tag + "_repeat"));
    return first;
  };
  std::vector<std::string> replay_text;

  std::vector<Criterion> criteria;
  criteria.push_back({1, "Mandelstam-Tamm property suite", 30, mt_suite});
  criteria.push_back({2, "two-level random protocol cloud (500 seeds)", 120, [&] {
                        const std::string text = "experiment = fig1-scatter\nseed = 1\nseeds = 500\nemit = both\n";
                        replay_text.push_back(text);
                        return checks_of(replayed(text, "fig1_scatter"));
                      }});
  criteria.push_back({3, "two-level annealing-time trend", 120, [&] {
                        const std::string text = "experiment = fig1-tsweep\nemit = both\n";
                        replay_text.push_back(text);
                        const RunReport r = replayed(text, "fig1_tsweep");
                        Outcome o = checks_of(r);
                        o.detail += "; int dE1_ad mean " + fmt("%.6f", r.result.metric("int_dE1_ad_mean")) +
                                    ", int dE2 slope " + fmt("%.4f", r.result.metric("int_dE2_slope"));
                        return o;
                      }});
  criteria.push_back({4, "two-level dE2 == dE_inv", 10, two_level_identity});
  criteria.push_back({5, "Ising mode factorization vs dense diagonalization", 60, tfim_oracle});
  criteria.push_back({6, "Ising trace and size scaling", 600, [&] {
                        const RunReport trace = run_preset("experiment = fig2-trace\nemit = both\n", out / "fig2_trace");
                        const RunReport scaling =
                            run_preset("experiment = fig2-scaling\nemit = both\n", out / "fig2_scaling");
                        const Outcome ineq_t = checks_of(trace), ineq_s = checks_of(scaling);
                        const double t_peak = trace.result.metric("peak_g_ad_dot_time");
                        const bool centred = std::abs(t_peak - 500.0) <= 50.0;
                        const double ag = scaling.result.metric("alpha_g_ad_dot");
                        const double ab = scaling.result.metric("alpha_qsl");
                        const bool alpha_ok = std::abs(ag - 0.303) <= 0.03 && std::abs(ab - ag) <= 0.03;
                        std::ostringstream os;
                        os << "inequality: trace " << (ineq_t.passed ? "ok" : "FAILED") << ", scaling "
                           << (ineq_s.passed ? "ok" : "FAILED") << " (max violation "
                           << fmt("%.3e", trace.result.metric("max_violation")) << "); peak at t=" << t_peak
                           << "; alpha g_ad_dot " << fmt("%.4f", ag) << ", qsl " << fmt("%.4f", ab)
                           << " over N in [" << scaling.result.metric("fit_n_lo") << ", "
                           << scaling.result.metric("fit_n_hi") << "], target 0.303 +- 0.03; window study alpha in ["
                           << fmt("%.4f", scaling.result.metric("window_alpha_min")) << ", "
                           << fmt("%.4f", scaling.result.metric("window_alpha_max"))
                           << "] written to fig2_scaling_windows.csv";
                        return Outcome{ineq_t.passed && ineq_s.passed && centred && alpha_ok, os.str()};
                      }});
  criteria.push_back({7, "quench saturation at J = 0", 10, quench_free_spins});
  criteria.push_back({8, "quench rate function, N = 2000", 60, [&] {
                        const std::string text = "experiment = fig3-quench\nemit = both\n";
                        replay_text.push_back(text);
                        const RunReport r = replayed(text, "fig3_quench");
                        Outcome o = checks_of(r);
                        bool inset = false;
                        if (o.passed) {
                          const auto table = expcli::parse_csv(expcli::read_file(out / "fig3_quench" / "fig3_quench.csv"));
                          inset = std::count(table.names.begin(), table.names.end(), "int_g_dot_abs") == 1 &&
                                  std::count(table.names.begin(), table.names.end(), "int_qsl_bound") == 1;
                        }
                        o.passed = o.passed && inset;
                        o.detail += "; kinks " + fmt("%.0f", r.result.metric("kinks")) + ", first at t=" +
                                    fmt("%.3f", r.result.metric("strongest_kink_time")) +
                                    (inset ? "; inset columns present" : "; inset columns missing");
                        return o;
                      }});
  criteria.push_back({9, "determinism (criteria 2, 3, 8 repeated)", 300, [&] {
                        std::size_t compared = 0;
                        std::vector<std::string> differ;
                        for (std::size_t i = 0; i < replay.size(); ++i) {
                          run_preset(replay_text[i], replay[i].second);
                          for (const auto& entry : fs::directory_iterator(replay[i].first)) {
                            if (entry.path().extension() != ".csv") continue;
                            const fs::path twin = replay[i].second / entry.path().filename();
                            ++compared;
                            if (!fs::exists(twin) || expcli::read_file(entry.path()) != expcli::read_file(twin))
                              differ.push_back(entry.path().filename().string());
                          }
                        }
                        std::ostringstream os;
                        os << compared << " CSV files compared, " << differ.size() << " differ";
                        for (const auto& d : differ) os << " " << d;
                        return Outcome{differ.empty() && compared > 0, os.str()};
                      }});

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool ok = o.passed && in_time;
    failures += ok ? 0 : 1;
    std::printf("%s %d %s: %s [%.1f s of %.0f s%s]\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(),
                secs, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
