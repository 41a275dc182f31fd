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

#include "qsl/qcore.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace qsl::dynamics {

using qcore::Eigensystem;
using qcore::HermitianOperator;
using qcore::SpectralFrame;
using qcore::StateVector;

// Uniform grid on [t0, t1] including both endpoints.
class TimeGrid {
 public:
  TimeGrid(double t0, double t1, std::size_t n_points);

  // Grid with spacing no larger than max_dt.
  static TimeGrid with_max_step(double t0, double t1, double max_dt);

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  std::size_t size() const { return n_; }
  double dt() const { return dt_; }
  // Exact endpoints at i = 0 and i = size() - 1.
  double at(std::size_t i) const;
  std::vector<double> points() const;

  bool operator==(const TimeGrid& other) const = default;

 private:
  double t0_, t1_;
  std::size_t n_;
  double dt_;
};

// t -> H(t) with constant dimension and an optional analytic dH/dt.
class HamiltonianFunction {
 public:
  using Evaluator = std::function<HermitianOperator(double)>;

  HamiltonianFunction(std::size_t dim, Evaluator h, Evaluator dh = {});

  // Finite-difference stencils stay inside [lo, hi].
  HamiltonianFunction& with_domain(double lo, double hi);

  std::size_t dim() const { return dim_; }
  bool has_analytic_derivative() const { return static_cast<bool>(dh_); }
  double domain_lo() const { return lo_; }
  double domain_hi() const { return hi_; }

  HermitianOperator operator()(double t) const;

  // Analytic derivative when available, else a central difference with
  // step fd_step (one-sided second order near the domain boundary).
  HermitianOperator derivative(double t, double fd_step) const;

 private:
  std::size_t dim_;
  Evaluator h_, dh_;
  double lo_ = -std::numeric_limits<double>::infinity();
  double hi_ = std::numeric_limits<double>::infinity();
};

struct Trajectory {
  TimeGrid grid;
  std::vector<StateVector> states;  // renormalized
  std::vector<double> norms;        // raw integrator norms

  const StateVector& at(std::size_t i) const { return states.at(i); }
  const StateVector& front() const { return states.front(); }
  const StateVector& back() const { return states.back(); }
};

inline constexpr double kNormDriftTolerance = 1e-8;

// Classical RK4 on i d/dt psi = H(t) psi. `h_at(t)` returns a matrix M with
// M * psi defined; it is evaluated once at each grid point and once at each
// step midpoint. `visit(i, t, psi)` sees the raw (unnormalized) state.
template <class Vector, class HamAt, class Visit>
void rk4_sweep(const TimeGrid& grid, Vector psi, HamAt&& h_at, Visit&& visit) {
  const double dt = grid.dt();
  auto h_now = h_at(grid.at(0));
  visit(std::size_t{0}, grid.at(0), psi);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double t = grid.at(i);
    const auto h_mid = h_at(t + 0.5 * dt);
    auto h_next = h_at(grid.at(i + 1));
    const Vector k1 = Complex(0.0, -1.0) * (h_now * psi);
    const Vector k2 = Complex(0.0, -1.0) * (h_mid * (psi + (0.5 * dt) * k1));
    const Vector k3 = Complex(0.0, -1.0) * (h_mid * (psi + (0.5 * dt) * k2));
    const Vector k4 = Complex(0.0, -1.0) * (h_next * (psi + dt * k3));
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    h_now = std::move(h_next);
    visit(i + 1, grid.at(i + 1), psi);
  }
}

// Fixed-step RK4 trajectory. Throws NormDriftError if any raw norm drifts by
// more than kNormDriftTolerance.
Trajectory propagate(const HamiltonianFunction& h, const StateVector& psi0, const TimeGrid& grid);

// Exact evolution under a time-independent diagonal Hamiltonian.
StateVector propagate_diagonal(std::span<const double> energies, const StateVector& psi0, double t);

// Instantaneous eigensystems on the grid in the parallel-transport gauge.
SpectralFrame spectral_frame(const HamiltonianFunction& h, const TimeGrid& grid);

// <n|d/dt n> per grid point from central differences of the gauge-fixed frame.
std::vector<Complex> berry_connection(const SpectralFrame& frame, std::size_t level);

// exp(-i int eps_n - int <n|n'>) |n(t)>. The connection enters through its
// imaginary part only, so the prefactor stays a pure phase.
Trajectory adiabatic_state(const SpectralFrame& frame, std::size_t level, const TimeGrid& grid);
Trajectory adiabatic_state(const HamiltonianFunction& h, std::size_t level, const TimeGrid& grid);

// H_CD with <m|H_CD|n> = i <m|dH|n> / (eps_n - eps_m), zero diagonal.
HermitianOperator counterdiabatic(const HamiltonianFunction& h, double t, const Eigensystem& eig,
                                  double fd_step = 1e-5);
HermitianOperator counterdiabatic(const HamiltonianFunction& h, double t, double fd_step = 1e-5);

// Propagates every eigenstate of H(t0): the moving basis {U(t)|n(0)>}.
// Limited to d <= kMaxFullBasisDim.
inline constexpr std::size_t kMaxFullBasisDim = 64;
std::vector<Trajectory> evolved_basis(const HamiltonianFunction& h, const TimeGrid& grid);

struct MovingBasisSplit {
  HermitianOperator h0;  // diagonal in the moving basis
  HermitianOperator h1;  // H - H0
};

MovingBasisSplit moving_basis_decomposition(const HamiltonianFunction& h, std::span<const Trajectory> basis,
                                            std::size_t t_index);

// Terms of the adiabatic expansion of H1 in the instantaneous eigenbasis.
struct AdiabaticExpansion {
  Eigensystem eig;
  CMatrix first_order;   // <m|H_CD|n>
  CMatrix second_order;  // i d/dt [<m|H_CD|n> / (eps_m - eps_n)]

  HermitianOperator first_order_operator() const;
  HermitianOperator second_order_operator() const;
};

// Derivative of the bracket by central differences with step `step`
// (one-sided near the domain boundary).
AdiabaticExpansion adexp_terms(const HamiltonianFunction& h, double t, double step, double fd_step = 1e-5);

// Off-diagonal H1 truncated after the second-order term; diagonal set to zero.
HermitianOperator adexp_h1(const HamiltonianFunction& h, double t, const TimeGrid& grid,
                           bool include_second_order = true);

}  // namespace qsl::dynamics
