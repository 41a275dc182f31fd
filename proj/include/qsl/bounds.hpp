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

#include "qsl/dynamics.hpp"
#include "qsl/qcore.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace qsl::bounds {

using dynamics::HamiltonianFunction;
using dynamics::TimeGrid;
using dynamics::Trajectory;
using qcore::Eigensystem;
using qcore::HermitianOperator;
using qcore::StateVector;

// Absolute slack allowed on every speed-limit inequality.
inline constexpr double kBoundTolerance = 1e-8;
// Overlaps below this magnitude are treated as zero crossings.
inline constexpr double kZeroOverlap = 1e-12;

struct NamedSeries {
  std::string name;
  std::vector<double> values;
};

// Fidelity angle to the adiabatic state plus per-point bound series.
struct BoundSeries {
  TimeGrid grid;
  std::vector<double> theta_ad;
  std::vector<double> dtheta_ad;
  std::vector<double> dtheta_ad_abs;
  std::vector<NamedSeries> bounds;        // insertion order
  std::map<std::string, double> integrals;

  // Stores the series and its trapezoidal integral under the same name.
  void add_bound(std::string name, std::vector<double> values);
  const std::vector<double>& bound(const std::string& name) const;
  double integral(const std::string& name) const;
};

// Rate function g = -(1/N) ln|overlap| with its speed limit.
struct RateSeries {
  TimeGrid grid;
  std::size_t n_sites = 1;
  std::vector<double> g;
  std::vector<double> g_dot;
  std::vector<double> bound;
  std::vector<std::uint8_t> flagged;  // zero crossings, excluded from checks
  std::vector<double> weak_imag;      // Im(weak value) / N where available

  // max(|g_dot| - bound) over points whose derivative stencil avoids flags.
  double max_violation() const;
  // max | |g_dot| - |weak_imag| | over the same points.
  double max_identity_deviation() const;
  bool excluded(std::size_t i) const;
};

struct MtResult {
  double lhs;  // arccos |<psi(0)|psi(T)>|
  double rhs;  // int_0^T sigma(H, psi) dt
  double violation() const { return lhs - rhs; }
};

MtResult mt_bound(const Trajectory& traj, const HamiltonianFunction& h);

// theta_ad per point, its derivative by central differences and the
// integrals "abs_dtheta_ad" and "dtheta_ad".
BoundSeries theta_ad_series(const Trajectory& traj, const Trajectory& ad_traj);

// Throws ContractError unless psi0 matches an eigenvector of the initial
// Hamiltonian to fidelity 1 - 1e-10. Returns that level.
std::size_t require_eigenstate_start(const StateVector& psi0, const Eigensystem& initial);

// sigma(H_CD, host) per point; host is |psi(t)> or |psi_ad(t)>.
std::vector<double> delta_e1(const Trajectory& host, std::span<const HermitianOperator> hcd);

// sigma(H - H_CD, psi) per point, eigenstate start enforced.
std::vector<double> delta_e2(const Trajectory& traj, std::span<const HermitianOperator> h,
                             std::span<const HermitianOperator> hcd, const Eigensystem& initial);

// sigma(H1 - H_CD, psi) per point, eigenstate start enforced.
std::vector<double> delta_e_inv(const Trajectory& traj, std::span<const HermitianOperator> h1,
                                std::span<const HermitianOperator> hcd, const Eigensystem& initial);

// sqrt(sum_{m != n} |d/dt (<m|H_CD|n> / (eps_m - eps_n))|^2) per grid point.
std::vector<double> adexp_estimate(const HamiltonianFunction& h, const TimeGrid& grid, std::size_t level);

struct WeakValue {
  Complex value;
  bool flagged;
};

// matrix_element / overlap, flagged (value 0) when |overlap| < kZeroOverlap.
WeakValue weak_value(Complex matrix_element, Complex overlap);

// Fills g_dot by central differences and marks the result; bound values at
// flagged points become NaN.
RateSeries assemble_rate_series(const TimeGrid& grid, std::size_t n_sites, std::vector<double> g,
                                std::vector<double> bound, std::vector<std::uint8_t> flagged,
                                std::vector<double> weak_imag = {});

// |g_dot| <= sigma(H, psi)/N |<psi0|psi_perp>/<psi0|psi>|. Dense path only:
// overlaps below 1e-300 raise UnderflowError.
RateSeries rate_bound_perp(const Trajectory& traj, const HamiltonianFunction& h, std::size_t n_sites);

// |g_dot| <= (1/N) |<psi0|H1|psi>/<psi0|psi>|.
RateSeries rate_bound_weak_initial(const Trajectory& traj, std::span<const HermitianOperator> h1,
                                   std::size_t n_sites);

enum class WeakOperator { counterdiabatic, h_minus_cd, h1_minus_cd };

std::vector<HermitianOperator> weak_operator_series(WeakOperator which, std::span<const HermitianOperator> h,
                                                    std::span<const HermitianOperator> hcd,
                                                    std::span<const HermitianOperator> h1);

// |g_ad_dot| <= (1/N) |<psi_ad|X|psi>/<psi_ad|psi>| with X from weak_operator_series.
RateSeries rate_bound_weak_adiabatic(const Trajectory& traj, const Trajectory& ad_traj,
                                     std::span<const HermitianOperator> op, std::size_t n_sites);

}  // namespace qsl::bounds
