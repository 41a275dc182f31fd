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

#include "qsl/expcli/experiments.hpp"

#include "qsl/errors.hpp"
#include "qsl/expcli/fit.hpp"
#include "qsl/models.hpp"
#include "qsl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace qsl::expcli {

namespace {

using dynamics::TimeGrid;
using models::PeakInfo;
using schedules::Schedule;

constexpr double kTol = bounds::kBoundTolerance;
constexpr double kIdentityTol = 1e-9;
constexpr double kReferenceAlpha = 0.303;
constexpr double kAlphaTol = 0.03;
constexpr std::size_t kScalingWindow = 5;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string tag_of(const std::string& protocol) {
  std::string out = protocol;
  std::replace(out.begin(), out.end(), ':', '_');
  return out;
}

TimeGrid grid_for(double t_final, double steps) {
  const auto n = static_cast<std::size_t>(std::llround(steps * t_final)) + 1;
  return TimeGrid(0.0, t_final, std::max<std::size_t>(n, 3));
}

std::vector<double> sample(const TimeGrid& grid, const Schedule& s) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = s.value(grid.at(i));
  return out;
}

std::vector<double> abs_of(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::abs(x); });
  return out;
}

// ---- two-level -------------------------------------------------------------

struct TwoLevelSummary {
  double theta_ad_t;
  double int_abs_dtheta;
  double int_dtheta;
  double int_de1_psi;
  double int_de1_ad;
  double int_de2;
  double int_de_inv;
  double max_de2_de_inv;
  double pointwise_de2;  // max |dtheta_ad| - dE2
  double pointwise_de1;  // max |dtheta_ad| - dE1_psi
};

TwoLevelSummary summarize(const models::TwoLevelRun& run) {
  const bounds::BoundSeries& b = run.bounds;
  TwoLevelSummary s{};
  s.theta_ad_t = b.theta_ad.back();
  s.int_abs_dtheta = b.integral("abs_dtheta_ad");
  s.int_dtheta = b.integral("dtheta_ad");
  s.int_de1_psi = b.integral("dE1_psi");
  s.int_de1_ad = b.integral("dE1_ad");
  s.int_de2 = b.integral("dE2");
  s.int_de_inv = b.integral("dE_inv");
  const auto& de2 = b.bound("dE2");
  const auto& dinv = b.bound("dE_inv");
  const auto& de1 = b.bound("dE1_psi");
  s.pointwise_de2 = s.pointwise_de1 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < de2.size(); ++i) {
    s.max_de2_de_inv = std::max(s.max_de2_de_inv, std::abs(de2[i] - dinv[i]));
    s.pointwise_de2 = std::max(s.pointwise_de2, b.dtheta_ad_abs[i] - de2[i]);
    s.pointwise_de1 = std::max(s.pointwise_de1, b.dtheta_ad_abs[i] - de1[i]);
  }
  return s;
}

// Worst violations of the integrated orderings, accumulated over runs.
struct OrderingChecks {
  double theta_vs_variation = -std::numeric_limits<double>::infinity();
  double variation_vs_de2 = -std::numeric_limits<double>::infinity();
  double variation_vs_de1 = -std::numeric_limits<double>::infinity();
  double theta_vs_de2 = -std::numeric_limits<double>::infinity();
  double theta_vs_de1 = -std::numeric_limits<double>::infinity();
  double de2_vs_de_inv = 0.0;

  void add(const TwoLevelSummary& s) {
    theta_vs_variation = std::max(theta_vs_variation, s.theta_ad_t - s.int_abs_dtheta);
    variation_vs_de2 = std::max(variation_vs_de2, s.int_abs_dtheta - s.int_de2);
    variation_vs_de1 = std::max(variation_vs_de1, s.int_abs_dtheta - std::min(s.int_de1_psi, s.int_de1_ad));
    theta_vs_de2 = std::max(theta_vs_de2, s.theta_ad_t - s.int_de2);
    theta_vs_de1 = std::max(theta_vs_de1, s.theta_ad_t - s.int_de1_psi);
    de2_vs_de_inv = std::max(de2_vs_de_inv, s.max_de2_de_inv);
  }

  void emit(ExperimentResult& r, const std::string& prefix) const {
    r.checks.push_back({prefix + "theta_ad(T) <= int|dtheta_ad|", theta_vs_variation, kTol});
    r.checks.push_back({prefix + "int|dtheta_ad| <= int dE2", variation_vs_de2, kTol});
    r.checks.push_back({prefix + "int|dtheta_ad| <= min(int dE1_psi, int dE1_ad)", variation_vs_de1, kTol});
    r.checks.push_back({prefix + "theta_ad(T) <= int dE2", theta_vs_de2, kTol});
    r.checks.push_back({prefix + "theta_ad(T) <= int dE1_psi", theta_vs_de1, kTol});
    r.checks.push_back({prefix + "dE2 == dE_inv pointwise", de2_vs_de_inv, kTol});
  }
};

models::TwoLevelRun two_level(const Resolved& c, const std::string& protocol, double t_final, bool adexp) {
  const Schedule theta = schedules::parse_schedule(protocol, std::numbers::pi / 2, 0.0, t_final);
  return models::two_level_run(models::TwoLevelModel(c.h_field, theta), grid_for(t_final, c.steps), {adexp});
}

Artifact two_level_trace(const models::TwoLevelRun& run, const Schedule& theta, const std::string& name,
                         const std::string& title) {
  const bounds::BoundSeries& b = run.bounds;
  Table t;
  t.add("t", b.grid.points());
  t.add("theta", sample(b.grid, theta));
  t.add("theta_ad", b.theta_ad);
  t.add("dtheta_ad", b.dtheta_ad);
  t.add("dtheta_ad_abs", b.dtheta_ad_abs);
  for (const auto& s : b.bounds) t.add(s.name, s.values);
  Chart chart = chart_from(t, "t", {"dtheta_ad_abs", "dE1_psi", "dE2"}, title);
  return {name, std::move(t), std::move(chart)};
}

void fig1_traces(const Resolved& c, ExperimentResult& r) {
  for (const std::string& p : c.protocols) {
    const models::TwoLevelRun run = two_level(c, p, c.t_final, true);
    const TwoLevelSummary s = summarize(run);
    OrderingChecks oc;
    oc.add(s);
    oc.emit(r, p + ": ");
    r.metrics[p + ".int_abs_dtheta_ad"] = s.int_abs_dtheta;
    r.metrics[p + ".int_dE1_psi"] = s.int_de1_psi;
    r.metrics[p + ".int_dE1_ad"] = s.int_de1_ad;
    r.metrics[p + ".int_dE2"] = s.int_de2;
    r.metrics[p + ".int_adexp"] = run.bounds.integral("adexp");
    r.metrics[p + ".theta_ad_T"] = s.theta_ad_t;
    r.metrics[p + ".pointwise_dtheta_minus_dE2"] = s.pointwise_de2;
    r.metrics[p + ".pointwise_dtheta_minus_dE1_psi"] = s.pointwise_de1;
    const Schedule theta = schedules::parse_schedule(p, std::numbers::pi / 2, 0.0, c.t_final);
    r.artifacts.push_back(two_level_trace(run, theta, "fig1_traces_" + tag_of(p), "two-level, " + p));
  }
  r.notes.push_back("pointwise |dtheta_ad| - dE metrics include finite-difference error of dtheta_ad");
}

void fig1_scatter(const Resolved& c, ExperimentResult& r) {
  std::vector<TwoLevelSummary> rows(c.seeds);
  numerics::parallel_for(c.seeds, [&](std::size_t i) {
    const Schedule theta = schedules::random_monotone(c.seed + i, c.t_final, std::numbers::pi / 2, 0.0);
    rows[i] = summarize(
        models::two_level_run(models::TwoLevelModel(c.h_field, theta), grid_for(c.t_final, c.steps), {false}));
  });
  OrderingChecks oc;
  Table t;
  std::vector<double> seed(c.seeds), x(c.seeds), y(c.seeds), theta_t(c.seeds), de1(c.seeds), de1_ad(c.seeds);
  for (std::size_t i = 0; i < c.seeds; ++i) {
    oc.add(rows[i]);
    seed[i] = static_cast<double>(c.seed + i);
    x[i] = rows[i].int_de2;
    y[i] = rows[i].int_abs_dtheta;
    theta_t[i] = rows[i].theta_ad_t;
    de1[i] = rows[i].int_de1_psi;
    de1_ad[i] = rows[i].int_de1_ad;
  }
  oc.emit(r, "");
  t.add("seed", seed);
  t.add("int_dE2", x);
  t.add("int_abs_dtheta_ad", y);
  t.add("theta_ad_T", theta_t);
  t.add("int_dE1_psi", de1);
  t.add("int_dE1_ad", de1_ad);
  Chart chart;
  chart.title = "two-level, random monotone protocols";
  chart.x_label = "int dE2";
  chart.x = x;
  chart.series.push_back({"int |dtheta_ad|", y, false, true});
  chart.series.push_back({"bound", x, true, false});
  r.metrics["points"] = static_cast<double>(c.seeds);
  r.artifacts.push_back({"fig1_scatter", std::move(t), std::move(chart)});
}

void fig1_tsweep(const Resolved& c, ExperimentResult& r) {
  const std::string& p = c.protocols.front();
  std::vector<TwoLevelSummary> rows(c.sweep.size());
  for (std::size_t i = 0; i < c.sweep.size(); ++i) rows[i] = summarize(two_level(c, p, c.sweep[i], false));
  OrderingChecks oc;
  Table t;
  std::vector<double> cols[7];
  for (const auto& s : rows) {
    oc.add(s);
    cols[0].push_back(s.int_dtheta);
    cols[1].push_back(s.int_abs_dtheta);
    cols[2].push_back(s.int_de1_ad);
    cols[3].push_back(s.int_de1_psi);
    cols[4].push_back(s.int_de2);
    cols[5].push_back(s.theta_ad_t);
    cols[6].push_back(s.int_de_inv);
  }
  oc.emit(r, "");
  const auto [lo, hi] = std::minmax_element(cols[2].begin(), cols[2].end());
  double mean = 0;
  for (double v : cols[2]) mean += v / static_cast<double>(cols[2].size());
  r.checks.push_back({"int dE1_ad spread / mean <= 5%", (*hi - *lo) / mean, 0.05});
  double rise = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < cols[4].size(); ++i) rise = std::max(rise, cols[4][i] - cols[4][i - 1]);
  r.checks.push_back({"int dE2 decreasing in T (max rise)", rise, 0.0});
  const std::size_t k = c.sweep.size() >= 3 ? c.sweep.size() - 3 : 0;
  const double slope = loglog_slope({c.sweep.begin() + static_cast<std::ptrdiff_t>(k), c.sweep.end()},
                                    {cols[4].begin() + static_cast<std::ptrdiff_t>(k), cols[4].end()});
  r.checks.push_back({"int dE2 log-log slope (top three T) = -1 +- 0.2", std::abs(slope + 1.0), 0.2});
  r.metrics["int_dE2_slope"] = slope;
  r.metrics["int_dE1_ad_mean"] = mean;
  t.add("T", c.sweep);
  t.add("int_dtheta_ad", cols[0]);
  t.add("int_abs_dtheta_ad", cols[1]);
  t.add("int_dE1_ad", cols[2]);
  t.add("int_dE1_psi", cols[3]);
  t.add("int_dE2", cols[4]);
  t.add("int_dE_inv", cols[6]);
  t.add("theta_ad_T", cols[5]);
  Chart chart = chart_from(t, "T", {"int_dtheta_ad", "int_abs_dtheta_ad", "int_dE1_ad", "int_dE2"},
                           "two-level, annealing-time dependence (" + p + ")");
  r.artifacts.push_back({"fig1_tsweep", std::move(t), std::move(chart)});
}

// ---- Ising chain ------------------------------------------------------------

models::TfimSeries tfim(std::size_t n, const std::string& protocol, double t_final, double steps) {
  const Schedule a = schedules::parse_schedule(protocol, 1.0, 0.0, t_final);
  const Schedule b = schedules::parse_schedule(protocol, 0.0, 1.0, t_final);
  return models::tfim_run(models::TfimModel(n, a, b), grid_for(t_final, steps));
}

struct TfimPeaks {
  PeakInfo g_dot;
  PeakInfo bound;
};

TfimPeaks peaks_of(const bounds::RateSeries& s) {
  std::vector<double> finite_bound = s.bound;
  for (double& v : finite_bound)
    if (!std::isfinite(v)) v = 0.0;
  return {models::peak_abs(s.g_dot, s.grid), models::peak_abs(finite_bound, s.grid)};
}

Artifact tfim_trace(const models::TfimSeries& s, const std::string& protocol, const std::string& name,
                    const std::string& title) {
  const bounds::RateSeries& r = s.adiabatic;
  const double t_final = r.grid.t1();
  Table t;
  t.add("t", r.grid.points());
  t.add("A", sample(r.grid, schedules::parse_schedule(protocol, 1.0, 0.0, t_final)));
  t.add("g_ad", r.g);
  t.add("g_ad_dot", r.g_dot);
  t.add("g_ad_dot_abs", abs_of(r.g_dot));
  t.add("qsl_bound", r.bound);
  t.add("weak_imag", r.weak_imag);
  t.add("g_loschmidt", s.g_loschmidt);
  t.add("ground_energy_per_site", s.ground_energy_per_site);
  Chart chart = chart_from(t, "t", {"g_ad_dot_abs", "qsl_bound"}, title);
  return {name, std::move(t), std::move(chart)};
}

void tfim_metrics(ExperimentResult& r, const std::string& prefix, const models::TfimSeries& s) {
  const TfimPeaks pk = peaks_of(s.adiabatic);
  r.metrics[prefix + "peak_g_ad_dot"] = pk.g_dot.value;
  r.metrics[prefix + "peak_g_ad_dot_time"] = pk.g_dot.time;
  r.metrics[prefix + "peak_qsl"] = pk.bound.value;
  r.metrics[prefix + "peak_qsl_time"] = pk.bound.time;
  r.metrics[prefix + "max_violation"] = s.adiabatic.max_violation();
  r.metrics[prefix + "weak_identity_fd_deviation"] = s.adiabatic.max_identity_deviation();
}

void fig2_trace(const Resolved& c, ExperimentResult& r) {
  const std::string& p = c.protocols.front();
  const models::TfimSeries s = tfim(c.n, p, c.t_final, c.steps);
  r.checks.push_back({"|g_ad_dot| <= qsl_bound", s.adiabatic.max_violation(), kTol});
  tfim_metrics(r, "", s);
  r.notes.push_back("weak_identity_fd_deviation compares the finite-difference g_ad_dot with Im W / N");
  std::ostringstream title;
  title << "Ising chain N=" << c.n << ", T=" << c.t_final << ", " << p;
  r.artifacts.push_back(tfim_trace(s, p, "fig2_trace", title.str()));
}

void fig2_scaling(const Resolved& c, ExperimentResult& r) {
  const std::string& p = c.protocols.front();
  const std::size_t m = c.sweep.size();
  std::vector<double> peak_g(m), peak_b(m), t_g(m), t_b(m), viol(m);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const models::TfimSeries s = tfim(static_cast<std::size_t>(c.sweep[i]), p, c.t_final, c.steps);
    const TfimPeaks pk = peaks_of(s.adiabatic);
    peak_g[i] = pk.g_dot.value;
    peak_b[i] = pk.bound.value;
    t_g[i] = pk.g_dot.time;
    t_b[i] = pk.bound.time;
    viol[i] = s.adiabatic.max_violation();
    worst = std::max(worst, viol[i]);
  }
  r.checks.push_back({"|g_ad_dot| <= qsl_bound (all N)", worst, kTol});
  Table t;
  t.add("N", c.sweep);
  t.add("peak_g_ad_dot", peak_g);
  t.add("peak_qsl", peak_b);
  t.add("t_peak_g_ad_dot", t_g);
  t.add("t_peak_qsl", t_b);
  t.add("max_violation", viol);
  Chart chart = chart_from(t, "N", {"peak_g_ad_dot", "peak_qsl"}, "Ising chain peak heights");
  chart.log_axes = true;
  r.artifacts.push_back({"fig2_scaling", std::move(t), std::move(chart)});

  const std::size_t w = std::min(kScalingWindow, m);
  const double n_lo = c.sweep[m - w], n_hi = c.sweep[m - 1];
  const FitResult fg = powerlaw_fit(c.sweep, peak_g, n_lo, n_hi);
  const FitResult fb = powerlaw_fit(c.sweep, peak_b, n_lo, n_hi);
  r.metrics["alpha_g_ad_dot"] = fg.alpha;
  r.metrics["alpha_qsl"] = fb.alpha;
  r.metrics["fit_residual_g_ad_dot"] = fg.residual;
  r.metrics["fit_residual_qsl"] = fb.residual;
  r.metrics["fit_n_lo"] = n_lo;
  r.metrics["fit_n_hi"] = n_hi;

  const std::vector<FitResult> wg = window_study(c.sweep, peak_g);
  const std::vector<FitResult> wb = window_study(c.sweep, peak_b);
  Table ws;
  std::vector<double> lo, hi, cnt, ag, ab;
  double a_min = std::numeric_limits<double>::infinity(), a_max = -a_min;
  for (std::size_t i = 0; i < wg.size(); ++i) {
    lo.push_back(wg[i].n_lo);
    hi.push_back(wg[i].n_hi);
    cnt.push_back(static_cast<double>(wg[i].count));
    ag.push_back(wg[i].alpha);
    ab.push_back(wb[i].alpha);
    a_min = std::min(a_min, wg[i].alpha);
    a_max = std::max(a_max, wg[i].alpha);
  }
  ws.add("n_lo", lo);
  ws.add("n_hi", hi);
  ws.add("points", cnt);
  ws.add("alpha_g_ad_dot", ag);
  ws.add("alpha_qsl", ab);
  r.artifacts.push_back({"fig2_scaling_windows", std::move(ws), std::nullopt});
  r.metrics["window_alpha_min"] = a_min;
  r.metrics["window_alpha_max"] = a_max;

  std::ostringstream os;
  os << "alpha over N in [" << n_lo << ", " << n_hi << "]: g_ad_dot " << fmt("%.4f", fg.alpha) << ", qsl "
     << fmt("%.4f", fb.alpha) << " (reference " << kReferenceAlpha << " +- " << kAlphaTol << ": "
     << (std::abs(fg.alpha - kReferenceAlpha) <= kAlphaTol ? "inside" : "outside")
     << "); window study spans alpha in [" << fmt("%.4f", a_min) << ", " << fmt("%.4f", a_max) << "]";
  r.notes.push_back(os.str());
}

void fig2_protocols(const Resolved& c, ExperimentResult& r) {
  for (const std::string& p : c.protocols) {
    const models::TfimSeries s = tfim(c.n, p, c.t_final, c.steps);
    r.checks.push_back({p + ": |g_ad_dot| <= qsl_bound", s.adiabatic.max_violation(), kTol});
    tfim_metrics(r, p + ".", s);
    std::ostringstream title;
    title << "Ising chain N=" << c.n << ", T=" << c.t_final << ", " << p;
    r.artifacts.push_back(tfim_trace(s, p, "fig2_protocols_" + tag_of(p), title.str()));
  }
}

void fig2_tsweep(const Resolved& c, ExperimentResult& r) {
  const std::string& p = c.protocols.front();
  std::vector<double> peak_g, peak_b, int_g, int_b, g_t, viol;
  double worst = -std::numeric_limits<double>::infinity();
  for (double t_final : c.sweep) {
    const models::TfimSeries s = tfim(c.n, p, t_final, c.steps);
    const TfimPeaks pk = peaks_of(s.adiabatic);
    peak_g.push_back(pk.g_dot.value);
    peak_b.push_back(pk.bound.value);
    int_g.push_back(numerics::trapezoid(abs_of(s.adiabatic.g_dot), s.adiabatic.grid.dt()));
    int_b.push_back(numerics::trapezoid(s.adiabatic.bound, s.adiabatic.grid.dt()));
    g_t.push_back(s.adiabatic.g.back());
    viol.push_back(s.adiabatic.max_violation());
    worst = std::max(worst, viol.back());
    std::ostringstream title;
    title << "Ising chain N=" << c.n << ", T=" << t_final << ", " << p;
    r.artifacts.push_back(tfim_trace(s, p, "fig2_tsweep_T" + fmt("%g", t_final), title.str()));
  }
  r.checks.push_back({"|g_ad_dot| <= qsl_bound (all T)", worst, kTol});
  Table t;
  t.add("T", c.sweep);
  t.add("peak_g_ad_dot", peak_g);
  t.add("peak_qsl", peak_b);
  t.add("int_g_ad_dot_abs", int_g);
  t.add("int_qsl", int_b);
  t.add("g_ad_T", g_t);
  t.add("max_violation", viol);
  Chart chart = chart_from(t, "T", {"peak_g_ad_dot", "peak_qsl"}, "Ising chain, annealing-time dependence");
  chart.log_axes = true;
  r.artifacts.push_back({"fig2_tsweep", std::move(t), std::move(chart)});
}

// ---- quench -------------------------------------------------------------------

void quench(const Resolved& c, ExperimentResult& r, const std::string& name) {
  const models::QuenchModel model(c.n, c.coupling, c.h_field);
  const TimeGrid grid = grid_for(c.t_final, c.steps);
  const models::QuenchSeries s = models::quench_run(model, grid);
  const bounds::RateSeries& rate = s.rate;
  const auto nd = static_cast<double>(c.n);

  double g_min = std::numeric_limits<double>::infinity();
  for (double v : rate.g)
    if (std::isfinite(v)) g_min = std::min(g_min, v);
  std::size_t flagged = 0;
  for (auto f : rate.flagged) flagged += f;

  r.checks.push_back({"|g_dot| <= qsl_bound (unflagged)", rate.max_violation(), kTol});
  r.checks.push_back({"N |g_dot| == |Im W|", nd * rate.max_identity_deviation(), kIdentityTol});
  r.checks.push_back({"g >= 0", -g_min, 1e-12});
  r.checks.push_back({"curvature spikes >= 1", 1.0 - static_cast<double>(s.kinks.size()), 0.0});
  r.metrics["kinks"] = static_cast<double>(s.kinks.size());
  r.metrics["flagged_points"] = static_cast<double>(flagged);
  r.metrics["max_precision_bits"] = static_cast<double>(s.max_precision_bits);
  r.metrics["e0"] = models::quench_e0(model);
  if (!s.kinks.empty()) r.metrics["strongest_kink_time"] = grid.at(s.kinks.front());

  std::vector<double> flags(rate.flagged.begin(), rate.flagged.end());
  Table t;
  t.add("t", grid.points());
  t.add("g", rate.g);
  t.add("g_dot", rate.g_dot);
  t.add("g_dot_abs", abs_of(rate.g_dot));
  t.add("qsl_bound", rate.bound);
  t.add("flagged", flags);
  t.add("int_g_dot", s.int_g_dot);
  t.add("int_g_dot_abs", s.int_abs_g_dot);
  t.add("int_qsl_bound", s.int_bound);
  std::ostringstream title;
  title << "collective-spin quench N=" << c.n << ", J=" << c.coupling << ", h=" << c.h_field;
  Chart chart = chart_from(t, "t", {"g_dot", "g_dot_abs", "qsl_bound"}, title.str());
  r.artifacts.push_back({name, std::move(t), std::move(chart)});

  Table k;
  std::vector<double> kt, ks;
  for (std::size_t i = 0; i < s.kinks.size(); ++i) {
    kt.push_back(grid.at(s.kinks[i]));
    ks.push_back(s.kink_strength[i]);
  }
  k.add("t", kt);
  k.add("curvature", ks);
  r.artifacts.push_back({name + "_kinks", std::move(k), std::nullopt});
}

void custom(const Resolved& c, ExperimentResult& r) {
  switch (c.model) {
    case Model::two_level: {
      fig1_traces(c, r);
      for (auto& a : r.artifacts) a.name = "custom_two_level_" + tag_of(c.protocols.front());
      break;
    }
    case Model::tfim: {
      const std::string& p = c.protocols.front();
      const models::TfimSeries s = tfim(c.n, p, c.t_final, c.steps);
      r.checks.push_back({"|g_ad_dot| <= qsl_bound", s.adiabatic.max_violation(), kTol});
      tfim_metrics(r, "", s);
      std::ostringstream title;
      title << "Ising chain N=" << c.n << ", T=" << c.t_final << ", " << p;
      r.artifacts.push_back(tfim_trace(s, p, "custom_tfim_" + tag_of(p), title.str()));
      break;
    }
    case Model::quench: quench(c, r, "custom_quench"); break;
  }
}

}  // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("loglog_slope: need two or more paired points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("loglog_slope: nonpositive value");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

bool ExperimentResult::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
}

const Check& ExperimentResult::check(const std::string& name) const {
  for (const Check& c : checks)
    if (c.name == name) return c;
  throw UsageError("no check named '" + name + "'");
}

double ExperimentResult::metric(const std::string& key) const {
  const auto it = metrics.find(key);
  if (it == metrics.end()) throw UsageError("no metric named '" + key + "'");
  return it->second;
}

const Artifact& ExperimentResult::artifact(const std::string& name) const {
  for (const Artifact& a : artifacts)
    if (a.name == name) return a;
  throw UsageError("no artifact named '" + name + "'");
}

std::string ExperimentResult::summary() const {
  std::ostringstream os;
  os << "experiment: " << experiment << "\n";
  for (const Check& c : checks)
    os << "check " << c.name << ": max_violation=" << fmt("%.6e", c.value) << " tolerance=" << fmt("%.1e", c.tolerance)
       << " " << (c.passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& [key, value] : metrics) os << "metric " << key << " = " << fmt("%.10g", value) << "\n";
  for (const std::string& n : notes) os << "note " << n << "\n";
  os << "status: " << (all_passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

ExperimentResult compute(const Resolved& c) {
  ExperimentResult r;
  r.experiment = to_string(c.experiment);
  switch (c.experiment) {
    case Experiment::fig1_traces: fig1_traces(c, r); break;
    case Experiment::fig1_scatter: fig1_scatter(c, r); break;
    case Experiment::fig1_tsweep: fig1_tsweep(c, r); break;
    case Experiment::fig2_trace: fig2_trace(c, r); break;
    case Experiment::fig2_scaling: fig2_scaling(c, r); break;
    case Experiment::fig2_protocols: fig2_protocols(c, r); break;
    case Experiment::fig2_tsweep: fig2_tsweep(c, r); break;
    case Experiment::fig3_quench: quench(c, r, "fig3_quench"); break;
    case Experiment::custom: custom(c, r); break;
  }
  return r;
}

RunReport run(const RunConfig& config) {
  const Resolved resolved = resolve(config);
  RunReport report{compute(resolved), {}};
  const std::filesystem::path& dir = config.out;
  auto put = [&](const std::filesystem::path& path, const std::string& contents) {
    write_file(path, contents);
    report.written.push_back(path);
  };
  put(dir / "config.txt", format_config(config));
  if (report.result.all_passed()) {
    for (const Artifact& a : report.result.artifacts) {
      if (config.emit.csv) put(dir / (a.name + ".csv"), format_csv(a.table));
      if (config.emit.svg && a.chart) put(dir / (a.name + ".svg"), render_svg(*a.chart));
    }
  } else {
    report.result.notes.push_back("inequality violation: data files not written");
  }
  put(dir / "summary.txt", report.result.summary());
  return report;
}

int exit_status(const RunReport& report) { return report.result.all_passed() ? kExitOk : kExitViolation; }

}  // namespace qsl::expcli
