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

#include "qsl/bounds.hpp"
#include "qsl/dynamics.hpp"
#include "qsl/schedules.hpp"

#include <cstddef>
#include <vector>

namespace qsl::models {

using bounds::BoundSeries;
using bounds::RateSeries;
using dynamics::HamiltonianFunction;
using dynamics::TimeGrid;
using dynamics::Trajectory;
using qcore::HermitianOperator;
using qcore::StateVector;
using schedules::Schedule;

// ---------------------------------------------------------------------------
// Two-level sweep: H(t) = (h/2)(sigma_z cos theta(t) + sigma_x sin theta(t)).
// ---------------------------------------------------------------------------

struct TwoLevelModel {
  double h;
  Schedule theta;

  TwoLevelModel(double field, Schedule protocol);

  HamiltonianFunction hamiltonian() const;
  // (theta'/2) sigma_y
  HermitianOperator counterdiabatic(double t) const;
};

struct TwoLevelOptions {
  bool with_adexp = true;
};

struct TwoLevelRun {
  Trajectory psi;
  Trajectory ad;
  // Bound series: dE1_psi, dE1_ad, dE2, dE_inv and (optionally) adexp.
  BoundSeries bounds;
};

// Starts in the ground state of H(0) and evaluates every bound on the grid.
TwoLevelRun two_level_run(const TwoLevelModel& model, const TimeGrid& grid, const TwoLevelOptions& options = {});

// ---------------------------------------------------------------------------
// Transverse-field Ising chain, H = -(A/2) sum sigma_x - (B/2) sum sigma_z sigma_z
// with periodic boundaries, factorized into momentum modes.
// ---------------------------------------------------------------------------

// Each mode k evolves under kModeFieldScale [(A - B cos k) tau_z + B sin k tau_x]
// in the (empty, paired) basis. The scale was fixed against dense exact
// diagonalization of the chain (tests/tfim_oracle_test.cpp).
inline constexpr double kModeFieldScale = 1.0;

struct TfimModel {
  std::size_t n_sites;
  Schedule a;
  Schedule b;

  TfimModel(std::size_t n, Schedule a_protocol, Schedule b_protocol);

  // k_m = (2m - 1) pi / N, m = 1 .. N/2 (even-parity sector).
  std::vector<double> momenta() const;
};

struct TfimMode {
  HermitianOperator hamiltonian;
  double theta;  // atan2(B sin k, A - B cos k)
};

TfimMode tfim_mode(const TfimModel& model, double k, double t);

// Mode Hamiltonian as a HamiltonianFunction with analytic derivative.
HamiltonianFunction tfim_mode_hamiltonian(const TfimModel& model, double k);

struct TfimSeries {
  // g_ad, its derivative, the counterdiabatic weak-value bound and Im W / N.
  RateSeries adiabatic;
  // -(1/N) ln |<psi(0)|psi(t)>|
  std::vector<double> g_loschmidt;
  // -(1/N) sum_k eps_k(t): mode-product ground energy per site.
  std::vector<double> ground_energy_per_site;
};

// Modes are integrated independently and reduced in fixed chunks of
// kModeChunk in mode order, so the result does not depend on thread count.
inline constexpr std::size_t kModeChunk = 64;
TfimSeries tfim_run(const TfimModel& model, const TimeGrid& grid);

struct PeakInfo {
  std::size_t index;
  double time;
  double value;
};

PeakInfo peak_abs(const std::vector<double>& values, const TimeGrid& grid);

// ---------------------------------------------------------------------------
// Collective-spin quench: H = -2 (J/N (S_z)^2 + h S_z), initial S_x = N/2 state.
// ---------------------------------------------------------------------------

struct QuenchModel {
  std::size_t n_spins;
  double J;
  double h;

  QuenchModel(std::size_t n, double coupling, double field);

  double magnetization(std::size_t level) const { return static_cast<double>(level) - 0.5 * static_cast<double>(n_spins); }
  // E_m = -2 (J m^2 / N + h m), m = -N/2 .. N/2
  std::vector<double> energies() const;
  // |a_m|^2 = C(N, m + N/2) / 2^N, evaluated in log space.
  std::vector<double> weights() const;
  StateVector initial_state() const;
};

// Conserved energy <psi0|H|psi0> = -J/2.
double quench_e0(const QuenchModel& model);
// Direct sum of weights times energies; oracle for quench_e0.
double quench_e0_direct(const QuenchModel& model);

struct QuenchPoint {
  double g;
  double g_dot;
  Complex weak;   // <psi0|H|psi(t)> / <psi0|psi(t)>
  double log_abs_overlap;
  long precision_bits;
};

// Evaluates the overlap sums at t in MPFR arithmetic, doubling the precision
// from 128 bits until the rounding error is below 2^-40 |G(t)|.
QuenchPoint quench_point(const QuenchModel& model, double t);

struct QuenchSeries {
  RateSeries rate;
  // Running integrals for the inset: int g_dot, int |g_dot|, int bound
  // (flagged intervals skipped).
  std::vector<double> int_g_dot;
  std::vector<double> int_abs_g_dot;
  std::vector<double> int_bound;
  // Grid indices of curvature spikes in g_dot, strongest first.
  std::vector<std::size_t> kinks;
  std::vector<double> kink_strength;
  long max_precision_bits = 0;
};

QuenchSeries quench_run(const QuenchModel& model, const TimeGrid& grid);

// Local maxima of |second difference of series| above `factor` times the
// median, strongest first, at most `limit` entries.
std::vector<std::size_t> curvature_spikes(const std::vector<double>& series, double factor = 10.0,
                                          std::size_t limit = 10);

}  // namespace qsl::models
