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

#include "qsl/bounds.hpp"

#include "qsl/errors.hpp"
#include "qsl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qsl::bounds {

namespace {

void require_aligned(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    std::ostringstream os;
    os << where << ": series lengths differ (" << a << " vs " << b << ")";
    throw UsageError(os.str());
  }
}

std::vector<double> variance_series(const Trajectory& traj, auto&& op_at) {
  std::vector<double> out(traj.states.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = qcore::variance_sqrt(op_at(i), traj.states[i]);
  return out;
}

}  // namespace

void BoundSeries::add_bound(std::string name, std::vector<double> values) {
  require_aligned(values.size(), grid.size(), "BoundSeries::add_bound");
  integrals[name] = numerics::trapezoid(values, grid.dt());
  bounds.push_back({std::move(name), std::move(values)});
}

const std::vector<double>& BoundSeries::bound(const std::string& name) const {
  for (const auto& s : bounds)
    if (s.name == name) return s.values;
  throw UsageError("BoundSeries: no series named '" + name + "'");
}

double BoundSeries::integral(const std::string& name) const {
  const auto it = integrals.find(name);
  if (it == integrals.end()) throw UsageError("BoundSeries: no integral named '" + name + "'");
  return it->second;
}

bool RateSeries::excluded(std::size_t i) const {
  if (flagged.empty()) return false;
  const std::size_t lo = i < 2 ? 0 : i - 2;
  const std::size_t hi = std::min(flagged.size() - 1, i + 2);
  for (std::size_t j = lo; j <= hi; ++j)
    if (flagged[j]) return true;
  return false;
}

double RateSeries::max_violation() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g_dot.size(); ++i) {
    if (excluded(i)) continue;
    worst = std::max(worst, std::abs(g_dot[i]) - bound[i]);
  }
  return worst;
}

double RateSeries::max_identity_deviation() const {
  if (weak_imag.empty()) throw UsageError("RateSeries: no weak-value column");
  double worst = 0.0;
  for (std::size_t i = 0; i < g_dot.size(); ++i) {
    if (excluded(i)) continue;
    worst = std::max(worst, std::abs(std::abs(g_dot[i]) - std::abs(weak_imag[i])));
  }
  return worst;
}

MtResult mt_bound(const Trajectory& traj, const HamiltonianFunction& h) {
  const std::vector<double> sigma =
      variance_series(traj, [&](std::size_t i) { return h(traj.grid.at(i)); });
  return {qcore::fubini_angle(traj.front(), traj.back()), numerics::trapezoid(sigma, traj.grid.dt())};
}

BoundSeries theta_ad_series(const Trajectory& traj, const Trajectory& ad_traj) {
  if (!(traj.grid == ad_traj.grid)) throw UsageError("theta_ad_series: trajectories live on different grids");
  BoundSeries out{traj.grid, {}, {}, {}, {}, {}};
  out.theta_ad.resize(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i)
    out.theta_ad[i] = qcore::fubini_angle(ad_traj.states[i], traj.states[i]);
  out.dtheta_ad = numerics::central_difference(out.theta_ad, traj.grid.dt());
  out.dtheta_ad_abs.resize(out.dtheta_ad.size());
  std::transform(out.dtheta_ad.begin(), out.dtheta_ad.end(), out.dtheta_ad_abs.begin(),
                 [](double v) { return std::abs(v); });
  out.integrals["abs_dtheta_ad"] = numerics::trapezoid(out.dtheta_ad_abs, traj.grid.dt());
  out.integrals["dtheta_ad"] = numerics::trapezoid(out.dtheta_ad, traj.grid.dt());
  return out;
}

std::size_t require_eigenstate_start(const StateVector& psi0, const Eigensystem& initial) {
  if (psi0.dim() != initial.dim()) throw UsageError("require_eigenstate_start: dimension mismatch");
  double best = 0.0;
  std::size_t level = 0;
  for (std::size_t n = 0; n < initial.dim(); ++n) {
    const double f = std::abs(initial.vector(n).dot(psi0.amplitudes()));
    if (f > best) {
      best = f;
      level = n;
    }
  }
  if (!(best > 1.0 - 1e-10)) {
    std::ostringstream os;
    os << "initial state is not an eigenstate of H(0) (best fidelity " << best << ")";
    throw ContractError(os.str());
  }
  return level;
}

std::vector<double> delta_e1(const Trajectory& host, std::span<const HermitianOperator> hcd) {
  require_aligned(host.states.size(), hcd.size(), "delta_e1");
  return variance_series(host, [&](std::size_t i) { return hcd[i]; });
}

std::vector<double> delta_e2(const Trajectory& traj, std::span<const HermitianOperator> h,
                             std::span<const HermitianOperator> hcd, const Eigensystem& initial) {
  require_eigenstate_start(traj.front(), initial);
  require_aligned(traj.states.size(), h.size(), "delta_e2");
  require_aligned(traj.states.size(), hcd.size(), "delta_e2");
  return variance_series(traj, [&](std::size_t i) { return h[i] - hcd[i]; });
}

std::vector<double> delta_e_inv(const Trajectory& traj, std::span<const HermitianOperator> h1,
                                std::span<const HermitianOperator> hcd, const Eigensystem& initial) {
  require_eigenstate_start(traj.front(), initial);
  require_aligned(traj.states.size(), h1.size(), "delta_e_inv");
  require_aligned(traj.states.size(), hcd.size(), "delta_e_inv");
  return variance_series(traj, [&](std::size_t i) { return h1[i] - hcd[i]; });
}

std::vector<double> adexp_estimate(const HamiltonianFunction& h, const TimeGrid& grid, std::size_t level) {
  if (level >= h.dim()) throw UsageError("adexp_estimate: level index out of range");
  const auto n = static_cast<Eigen::Index>(level);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const dynamics::AdiabaticExpansion terms = dynamics::adexp_terms(h, grid.at(i), grid.dt());
    double sum = 0.0;
    for (Eigen::Index m = 0; m < terms.second_order.rows(); ++m)
      if (m != n) sum += std::norm(terms.second_order(m, n));
    out[i] = std::sqrt(sum);
  }
  return out;
}

WeakValue weak_value(Complex matrix_element, Complex overlap) {
  if (std::abs(overlap) < kZeroOverlap) return {Complex(0.0, 0.0), true};
  return {matrix_element / overlap, false};
}

RateSeries assemble_rate_series(const TimeGrid& grid, std::size_t n_sites, std::vector<double> g,
                                std::vector<double> bound, std::vector<std::uint8_t> flagged,
                                std::vector<double> weak_imag) {
  require_aligned(g.size(), grid.size(), "assemble_rate_series");
  require_aligned(bound.size(), grid.size(), "assemble_rate_series");
  require_aligned(flagged.size(), grid.size(), "assemble_rate_series");
  if (!weak_imag.empty()) require_aligned(weak_imag.size(), grid.size(), "assemble_rate_series");
  RateSeries out{grid, n_sites, std::move(g), {}, std::move(bound), std::move(flagged), std::move(weak_imag)};
  out.g_dot = numerics::central_difference(out.g, grid.dt());
  for (std::size_t i = 0; i < out.bound.size(); ++i)
    if (out.flagged[i]) out.bound[i] = std::numeric_limits<double>::quiet_NaN();
  return out;
}

RateSeries rate_bound_perp(const Trajectory& traj, const HamiltonianFunction& h, std::size_t n_sites) {
  const std::size_t n = traj.states.size();
  const auto nd = static_cast<double>(n_sites);
  std::vector<double> g(n), bound(n);
  std::vector<std::uint8_t> flags(n, 0);
  const StateVector& psi0 = traj.front();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex overlap = psi0.inner(traj.states[i]);
    const double mag = std::abs(overlap);
    if (mag < 1e-300) {
      std::ostringstream os;
      os << "rate_bound_perp: overlap " << mag << " underflows at t=" << traj.grid.at(i)
         << "; use the model's log-space path";
      throw UnderflowError(os.str());
    }
    g[i] = -std::log(mag) / nd;
    flags[i] = mag < kZeroOverlap;
    try {
      const qcore::OrthogonalComponent oc = qcore::orthogonal_component(h(traj.grid.at(i)), traj.states[i]);
      bound[i] = oc.sigma / nd * std::abs(psi0.inner(oc.perp) / overlap);
    } catch (const DegenerateDecompositionError&) {
      bound[i] = 0.0;  // stationary: g is constant and the bound is trivially saturated
    }
  }
  return assemble_rate_series(traj.grid, n_sites, std::move(g), std::move(bound), std::move(flags));
}

RateSeries rate_bound_weak_initial(const Trajectory& traj, std::span<const HermitianOperator> h1,
                                   std::size_t n_sites) {
  const std::size_t n = traj.states.size();
  require_aligned(n, h1.size(), "rate_bound_weak_initial");
  const auto nd = static_cast<double>(n_sites);
  std::vector<double> g(n), bound(n), predicted(n);
  std::vector<std::uint8_t> flags(n, 0);
  const StateVector& psi0 = traj.front();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex overlap = psi0.inner(traj.states[i]);
    const Complex element = psi0.amplitudes().dot(h1[i].apply(traj.states[i].amplitudes()));
    const WeakValue w = weak_value(element, overlap);
    g[i] = -std::log(std::max(std::abs(overlap), 1e-300)) / nd;
    flags[i] = w.flagged;
    bound[i] = std::abs(w.value) / nd;
    predicted[i] = -w.value.imag() / nd;
  }
  return assemble_rate_series(traj.grid, n_sites, std::move(g), std::move(bound), std::move(flags),
                              std::move(predicted));
}

std::vector<HermitianOperator> weak_operator_series(WeakOperator which, std::span<const HermitianOperator> h,
                                                    std::span<const HermitianOperator> hcd,
                                                    std::span<const HermitianOperator> h1) {
  std::vector<HermitianOperator> out;
  out.reserve(hcd.size());
  for (std::size_t i = 0; i < hcd.size(); ++i) {
    switch (which) {
      case WeakOperator::counterdiabatic: out.push_back(hcd[i]); break;
      case WeakOperator::h_minus_cd: out.push_back(h[i] - hcd[i]); break;
      case WeakOperator::h1_minus_cd: out.push_back(h1[i] - hcd[i]); break;
    }
  }
  return out;
}

RateSeries rate_bound_weak_adiabatic(const Trajectory& traj, const Trajectory& ad_traj,
                                     std::span<const HermitianOperator> op, std::size_t n_sites) {
  if (!(traj.grid == ad_traj.grid)) throw UsageError("rate_bound_weak_adiabatic: trajectories on different grids");
  const std::size_t n = traj.states.size();
  require_aligned(n, op.size(), "rate_bound_weak_adiabatic");
  if (!(std::abs(ad_traj.front().inner(traj.front())) > 1.0 - 1e-10))
    throw ContractError("rate_bound_weak_adiabatic: initial state differs from the adiabatic state");
  const auto nd = static_cast<double>(n_sites);
  std::vector<double> g(n), bound(n), predicted(n);
  std::vector<std::uint8_t> flags(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex overlap = ad_traj.states[i].inner(traj.states[i]);
    const Complex element = ad_traj.states[i].amplitudes().dot(op[i].apply(traj.states[i].amplitudes()));
    const WeakValue w = weak_value(element, overlap);
    g[i] = -std::log(std::max(std::abs(overlap), 1e-300)) / nd;
    flags[i] = w.flagged;
    bound[i] = std::abs(w.value) / nd;
    predicted[i] = w.value.imag() / nd;
  }
  return assemble_rate_series(traj.grid, n_sites, std::move(g), std::move(bound), std::move(flags),
                              std::move(predicted));
}

}  // namespace qsl::bounds
