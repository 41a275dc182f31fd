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

#include "qsl/dynamics.hpp"

#include "qsl/errors.hpp"
#include "qsl/numerics.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace qsl::dynamics {

namespace {

struct Stencil {
  std::array<double, 3> offsets;
  std::array<double, 3> weights;
  int count;
};

// Three-point first-derivative stencil kept inside [lo, hi].
Stencil first_derivative_stencil(double t, double step, double lo, double hi) {
  const double inv = 1.0 / (2.0 * step);
  if (t - step >= lo && t + step <= hi) return {{-step, step, 0.0}, {-inv, inv, 0.0}, 2};
  if (t + 2.0 * step <= hi) return {{0.0, step, 2.0 * step}, {-3.0 * inv, 4.0 * inv, -inv}, 3};
  if (t - 2.0 * step >= lo) return {{0.0, -step, -2.0 * step}, {3.0 * inv, -4.0 * inv, inv}, 3};
  throw UsageError("finite-difference step larger than the Hamiltonian's domain");
}

void require_gap(double gap, double t, Eigen::Index m, Eigen::Index n) {
  if (std::abs(gap) < 1e-10) {
    std::ostringstream os;
    os << "gap collision at t=" << t << " between levels " << m << " and " << n << " (gap " << gap << ")";
    throw GapCollisionError(os.str());
  }
}

// <m|H_CD|n> in the eigenbasis of `eig`.
CMatrix counterdiabatic_elements(const CMatrix& dh, const Eigensystem& eig, double t) {
  const CMatrix m = eig.vectors.adjoint() * dh * eig.vectors;
  const Eigen::Index d = m.rows();
  CMatrix c = CMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (i == j) continue;
      const double gap = eig.values(j) - eig.values(i);
      require_gap(gap, t, i, j);
      c(i, j) = kI * m(i, j) / gap;
    }
  }
  return c;
}

HermitianOperator to_lab(const CMatrix& elements, const Eigensystem& eig) {
  return HermitianOperator(CMatrix(eig.vectors * elements * eig.vectors.adjoint()));
}

}  // namespace

TimeGrid::TimeGrid(double t0, double t1, std::size_t n_points) : t0_(t0), t1_(t1), n_(n_points), dt_(0.0) {
  if (!(t1 > t0)) throw UsageError("TimeGrid: t1 must exceed t0");
  if (n_points < 2) throw UsageError("TimeGrid: need at least 2 points");
  dt_ = (t1 - t0) / static_cast<double>(n_points - 1);
}

TimeGrid TimeGrid::with_max_step(double t0, double t1, double max_dt) {
  if (!(max_dt > 0.0)) throw UsageError("TimeGrid: max_dt must be positive");
  const auto intervals = static_cast<std::size_t>(std::ceil((t1 - t0) / max_dt - 1e-9));
  return TimeGrid(t0, t1, std::max<std::size_t>(intervals, 1) + 1);
}

double TimeGrid::at(std::size_t i) const {
  if (i + 1 == n_) return t1_;
  return t0_ + static_cast<double>(i) * dt_;
}

std::vector<double> TimeGrid::points() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = at(i);
  return out;
}

HamiltonianFunction::HamiltonianFunction(std::size_t dim, Evaluator h, Evaluator dh)
    : dim_(dim), h_(std::move(h)), dh_(std::move(dh)) {
  if (!h_) throw UsageError("HamiltonianFunction: evaluator is empty");
}

HamiltonianFunction& HamiltonianFunction::with_domain(double lo, double hi) {
  if (!(hi > lo)) throw UsageError("HamiltonianFunction: empty domain");
  lo_ = lo;
  hi_ = hi;
  return *this;
}

HermitianOperator HamiltonianFunction::operator()(double t) const {
  HermitianOperator op = h_(t);
  if (op.dim() != dim_) throw UsageError("HamiltonianFunction: evaluator changed dimension");
  return op;
}

HermitianOperator HamiltonianFunction::derivative(double t, double fd_step) const {
  if (dh_) {
    HermitianOperator op = dh_(t);
    if (op.dim() != dim_) throw UsageError("HamiltonianFunction: derivative changed dimension");
    return op;
  }
  const Stencil s = first_derivative_stencil(t, fd_step, lo_, hi_);
  CMatrix acc = CMatrix::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (int k = 0; k < s.count; ++k) acc += s.weights[k] * (*this)(t + s.offsets[k]).matrix();
  return HermitianOperator(std::move(acc));
}

Trajectory propagate(const HamiltonianFunction& h, const StateVector& psi0, const TimeGrid& grid) {
  if (psi0.dim() != h.dim()) throw UsageError("propagate: initial state and Hamiltonian dimensions differ");
  Trajectory traj{grid, {}, {}};
  traj.states.reserve(grid.size());
  traj.norms.reserve(grid.size());
  rk4_sweep(grid, CVector(psi0.amplitudes()), [&](double t) { return CMatrix(h(t).matrix()); },
            [&](std::size_t i, double t, const CVector& psi) {
              const double norm = psi.norm();
              if (std::abs(norm - 1.0) >= kNormDriftTolerance) {
                std::ostringstream os;
                os << "propagate: norm drift " << std::abs(norm - 1.0) << " at t=" << t << " (step " << i
                   << ", dt=" << grid.dt() << "); increase the number of grid points";
                throw NormDriftError(os.str());
              }
              traj.norms.push_back(norm);
              traj.states.emplace_back(psi);
            });
  return traj;
}

StateVector propagate_diagonal(std::span<const double> energies, const StateVector& psi0, double t) {
  if (energies.size() != psi0.dim()) throw UsageError("propagate_diagonal: energies and state dimensions differ");
  CVector out(psi0.amplitudes());
  for (std::size_t m = 0; m < energies.size(); ++m)
    out(static_cast<Eigen::Index>(m)) *= std::polar(1.0, -energies[m] * t);
  return StateVector(std::move(out));
}

SpectralFrame spectral_frame(const HamiltonianFunction& h, const TimeGrid& grid) {
  SpectralFrame frame;
  frame.times = grid.points();
  frame.systems.reserve(grid.size());
  for (double t : frame.times) frame.systems.push_back(qcore::eig_herm(h(t)));
  return qcore::gauge_fix_continuity(std::move(frame));
}

std::vector<Complex> berry_connection(const SpectralFrame& frame, std::size_t level) {
  const std::size_t n = frame.size();
  if (n < 3) throw UsageError("berry_connection: need at least 3 grid points");
  const double dt = frame.times[1] - frame.times[0];
  const auto col = static_cast<Eigen::Index>(level);
  auto vec = [&](std::size_t i) { return frame.systems[i].vectors.col(col); };
  std::vector<Complex> out(n);
  const double inv = 1.0 / (2.0 * dt);
  out[0] = vec(0).dot((-3.0 * vec(0) + 4.0 * vec(1) - vec(2)) * inv);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = vec(i).dot((vec(i + 1) - vec(i - 1)) * inv);
  out[n - 1] = vec(n - 1).dot((3.0 * vec(n - 1) - 4.0 * vec(n - 2) + vec(n - 3)) * inv);
  return out;
}

Trajectory adiabatic_state(const SpectralFrame& frame, std::size_t level, const TimeGrid& grid) {
  if (frame.size() != grid.size()) throw UsageError("adiabatic_state: frame and grid sizes differ");
  if (frame.size() == 0 || level >= frame.systems.front().dim())
    throw UsageError("adiabatic_state: level index out of range");
  const auto col = static_cast<Eigen::Index>(level);

  std::vector<double> energy(frame.size());
  std::vector<double> connection(frame.size());
  const std::vector<Complex> berry = berry_connection(frame, level);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    energy[i] = frame.systems[i].values(col);
    connection[i] = berry[i].imag();
  }
  const std::vector<double> dynamical = numerics::cumulative_trapezoid(energy, grid.dt());
  const std::vector<double> geometric = numerics::cumulative_trapezoid(connection, grid.dt());

  Trajectory traj{grid, {}, std::vector<double>(grid.size(), 1.0)};
  traj.states.reserve(grid.size());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const Complex phase = std::polar(1.0, -(dynamical[i] + geometric[i]));
    traj.states.emplace_back(CVector(phase * frame.systems[i].vectors.col(col)));
  }
  return traj;
}

Trajectory adiabatic_state(const HamiltonianFunction& h, std::size_t level, const TimeGrid& grid) {
  return adiabatic_state(spectral_frame(h, grid), level, grid);
}

HermitianOperator counterdiabatic(const HamiltonianFunction& h, double t, const Eigensystem& eig, double fd_step) {
  const CMatrix dh = h.derivative(t, fd_step).matrix();
  return to_lab(counterdiabatic_elements(dh, eig, t), eig);
}

HermitianOperator counterdiabatic(const HamiltonianFunction& h, double t, double fd_step) {
  return counterdiabatic(h, t, qcore::eig_herm(h(t)), fd_step);
}

std::vector<Trajectory> evolved_basis(const HamiltonianFunction& h, const TimeGrid& grid) {
  if (h.dim() > kMaxFullBasisDim) {
    std::ostringstream os;
    os << "evolved_basis: dimension " << h.dim() << " exceeds the full-basis cap " << kMaxFullBasisDim;
    throw UsageError(os.str());
  }
  const Eigensystem eig0 = qcore::eig_herm(h(grid.t0()));
  std::vector<Trajectory> basis(h.dim(), Trajectory{grid, {}, {}});
  numerics::parallel_for(h.dim(), [&](std::size_t n) { basis[n] = propagate(h, StateVector(eig0.vector(n)), grid); });
  return basis;
}

MovingBasisSplit moving_basis_decomposition(const HamiltonianFunction& h, std::span<const Trajectory> basis,
                                            std::size_t t_index) {
  const std::size_t d = h.dim();
  if (basis.size() != d) throw UsageError("moving_basis_decomposition: basis must hold one trajectory per level");
  const auto dd = static_cast<Eigen::Index>(d);
  CMatrix u(dd, dd);
  for (std::size_t n = 0; n < d; ++n) u.col(static_cast<Eigen::Index>(n)) = basis[n].at(t_index).amplitudes();
  const double deviation = (u.adjoint() * u - CMatrix::Identity(dd, dd)).cwiseAbs().maxCoeff();
  if (deviation >= 1e-8) {
    std::ostringstream os;
    os << "moving_basis_decomposition: evolved basis off orthonormality by " << deviation
       << "; refine the propagation grid";
    throw PropagationAccuracyError(os.str());
  }
  const double t = basis.front().grid.at(t_index);
  const HermitianOperator ht = h(t);
  const CMatrix in_basis = u.adjoint() * ht.matrix() * u;
  const CMatrix h0 = u * in_basis.diagonal().real().cast<Complex>().asDiagonal() * u.adjoint();
  HermitianOperator h0_op{CMatrix(h0)};
  return {h0_op, ht - h0_op};
}

HermitianOperator AdiabaticExpansion::first_order_operator() const { return to_lab(first_order, eig); }

HermitianOperator AdiabaticExpansion::second_order_operator() const { return to_lab(second_order, eig); }

AdiabaticExpansion adexp_terms(const HamiltonianFunction& h, double t, double step, double fd_step) {
  AdiabaticExpansion out;
  out.eig = qcore::eig_herm(h(t));
  out.first_order = counterdiabatic_elements(h.derivative(t, fd_step).matrix(), out.eig, t);

  const Eigen::Index d = out.first_order.rows();
  auto bracket = [&](double s) {
    Eigensystem es = qcore::eig_herm(h(s));
    qcore::align_phases(out.eig, es);
    const CMatrix c = counterdiabatic_elements(h.derivative(s, fd_step).matrix(), es, s);
    CMatrix q = CMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index i = 0; i < d; ++i)
        if (i != j) q(i, j) = c(i, j) / (es.values(i) - es.values(j));
    return q;
  };
  const Stencil s = first_derivative_stencil(t, step, h.domain_lo(), h.domain_hi());
  CMatrix dq = CMatrix::Zero(d, d);
  for (int k = 0; k < s.count; ++k) dq += s.weights[k] * bracket(t + s.offsets[k]);
  out.second_order = kI * dq;
  out.second_order.diagonal().setZero();
  return out;
}

HermitianOperator adexp_h1(const HamiltonianFunction& h, double t, const TimeGrid& grid, bool include_second_order) {
  const AdiabaticExpansion terms = adexp_terms(h, t, grid.dt());
  if (!include_second_order) return terms.first_order_operator();
  return to_lab(CMatrix(terms.first_order + terms.second_order), terms.eig);
}

}  // namespace qsl::dynamics
