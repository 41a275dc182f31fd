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

#include "qsl/qcore.hpp"

#include "qsl/errors.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace qsl::qcore {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    std::ostringstream os;
    os << where << ": dimension mismatch (" << a << " vs " << b << ")";
    throw UsageError(os.str());
  }
}

double hermiticity_scale(const CMatrix& m) {
  return std::max(1.0, m.cwiseAbs().maxCoeff());
}

Representation infer_representation(const CMatrix& m) {
  if (m.rows() == 2) return Representation::two_by_two;
  return Representation::dense;
}

Eigensystem eig_2x2(const CMatrix& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const Complex c = m(0, 1);
  const double mean = 0.5 * (a + d);
  const double delta = 0.5 * (a - d);
  const double r = std::hypot(delta, std::abs(c));

  Eigensystem es;
  es.values.resize(2);
  es.vectors.resize(2, 2);
  es.values << mean - r, mean + r;
  if (r == 0.0) {
    es.vectors.setIdentity();
    return es;
  }
  // Pick the algebraically stable form for each eigenvector.
  Eigen::Vector2cd lower, upper;
  if (delta >= 0.0) {
    lower << c, -(delta + r);
    upper << delta + r, std::conj(c);
  } else {
    lower << r - delta, -std::conj(c);
    upper << c, r - delta;
  }
  es.vectors.col(0) = lower.normalized();
  es.vectors.col(1) = upper.normalized();
  return es;
}

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

Eigensystem eig_jacobi(CMatrix a, const EigOptions& opt) {
  const Eigen::Index n = a.rows();
  CMatrix v = CMatrix::Identity(n, n);
  const double tol = opt.off_diagonal_tol * std::max(1.0, a.norm());

  int sweep = 0;
  while (off_diagonal_norm(a) >= tol) {
    if (++sweep > opt.max_sweeps) {
      std::ostringstream os;
      os << "eig_herm: Jacobi did not converge in " << opt.max_sweeps
         << " sweeps (off-diagonal norm " << off_diagonal_norm(a) << ")";
      throw NonConvergenceError(os.str());
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const Complex e = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex ce = std::conj(e);

        // a <- a U with U = [[c, s], [-s conj(e), c conj(e)]] on (p, q).
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s * ce * akq;
          a(k, q) = s * akp + c * ce * akq;
        }
        // a <- U^dagger a.
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * e * aqk;
          a(q, k) = s * apk + c * e * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s * ce * vkq;
          v(k, q) = s * vkp + c * ce * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  Eigensystem es;
  es.values.resize(n);
  es.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    es.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
    es.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return es;
}

void fix_leading_phase(CMatrix& vectors) {
  for (Eigen::Index n = 0; n < vectors.cols(); ++n) {
    Eigen::Index imax = 0;
    vectors.col(n).cwiseAbs().maxCoeff(&imax);
    const Complex lead = vectors(imax, n);
    if (std::abs(lead) > 0.0) vectors.col(n) *= std::abs(lead) / lead;
  }
}

}  // namespace

StateVector::StateVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) throw UsageError("StateVector: dimension must be at least 2");
  const double norm = amps_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw UsageError("StateVector: amplitudes have zero or non-finite norm");
  amps_ /= norm;
}

Complex StateVector::inner(const StateVector& other) const {
  require_same_dim(dim(), other.dim(), "StateVector::inner");
  return amps_.dot(other.amps_);
}

HermitianOperator::HermitianOperator(CMatrix entries) : m_(std::move(entries)), rep_(Representation::dense) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw UsageError("HermitianOperator: matrix must be square and non-empty");
  const double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-12 * hermiticity_scale(m_)) {
    std::ostringstream os;
    os << "HermitianOperator: matrix is not Hermitian (max deviation " << dev << ")";
    throw UsageError(os.str());
  }
  m_ = 0.5 * (m_ + m_.adjoint()).eval();
  rep_ = infer_representation(m_);
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = values[i];
  return HermitianOperator(std::move(m), Representation::diagonal);
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return HermitianOperator(CMatrix::Zero(d, d), dim == 2 ? Representation::two_by_two : Representation::diagonal);
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return HermitianOperator(CMatrix::Identity(d, d), dim == 2 ? Representation::two_by_two : Representation::diagonal);
}

CVector HermitianOperator::apply(const CVector& v) const {
  require_same_dim(dim(), static_cast<std::size_t>(v.size()), "HermitianOperator::apply");
  if (rep_ == Representation::diagonal) return m_.diagonal().cwiseProduct(v);
  return m_ * v;
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& rhs) const {
  require_same_dim(dim(), rhs.dim(), "HermitianOperator::operator+");
  const Representation rep = (rep_ == Representation::diagonal && rhs.rep_ == Representation::diagonal)
                                 ? Representation::diagonal
                                 : infer_representation(m_);
  return HermitianOperator(m_ + rhs.m_, rep);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& rhs) const {
  return *this + rhs.scaled(-1.0);
}

HermitianOperator HermitianOperator::scaled(double factor) const {
  return HermitianOperator(m_ * factor, rep_);
}

HermitianOperator pauli_x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return HermitianOperator(std::move(m));
}

HermitianOperator pauli_y() {
  CMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return HermitianOperator(std::move(m));
}

HermitianOperator pauli_z() {
  const double d[] = {1.0, -1.0};
  return HermitianOperator(CMatrix(HermitianOperator::diagonal(d).matrix()));
}

double Eigensystem::min_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < values.size(); ++i) gap = std::min(gap, values(i) - values(i - 1));
  return gap;
}

double expectation(const HermitianOperator& op, const StateVector& psi) {
  require_same_dim(op.dim(), psi.dim(), "expectation");
  const Complex value = psi.amplitudes().dot(op.apply(psi.amplitudes()));
  if (std::abs(value.imag()) >= 1e-10 * std::max(1.0, op.matrix().cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << "expectation: imaginary part " << value.imag() << " exceeds round-off";
    throw UsageError(os.str());
  }
  return value.real();
}

double variance_sqrt(const HermitianOperator& op, const StateVector& psi) {
  const double mean = expectation(op, psi);
  return (op.apply(psi.amplitudes()) - mean * psi.amplitudes()).norm();
}

double fubini_angle(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim(), "fubini_angle");
  const Complex ov = a.inner(b);
  const double cos_part = std::min(1.0, std::abs(ov));
  // sine from the rejection norm; arccos alone loses small angles
  const double sin_part = (b.amplitudes() - ov * a.amplitudes()).norm();
  return std::atan2(std::min(1.0, sin_part), cos_part);
}

OrthogonalComponent orthogonal_component(const HermitianOperator& op, const StateVector& psi) {
  const double mean = expectation(op, psi);
  CVector residual = op.apply(psi.amplitudes()) - mean * psi.amplitudes();
  const double sigma = residual.norm();
  if (sigma <= 1e-13) {
    std::ostringstream os;
    os << "orthogonal_component: variance " << sigma << " too small, orthogonal state undefined";
    throw DegenerateDecompositionError(os.str());
  }
  return {StateVector(residual / sigma), sigma};
}

Eigensystem eig_herm(const HermitianOperator& op, const EigOptions& options) {
  if (op.dim() > options.max_dim) {
    std::ostringstream os;
    os << "eig_herm: dimension " << op.dim() << " exceeds cap " << options.max_dim;
    throw UsageError(os.str());
  }
  if (op.representation() == Representation::diagonal) {
    Eigensystem es;
    const auto n = static_cast<Eigen::Index>(op.dim());
    std::vector<Eigen::Index> order(op.dim());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return op.matrix()(i, i).real() < op.matrix()(j, j).real(); });
    es.values.resize(n);
    es.vectors = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index src = order[static_cast<std::size_t>(k)];
      es.values(k) = op.matrix()(src, src).real();
      es.vectors(src, k) = 1.0;
    }
    return es;
  }
  if (op.dim() == 2) return eig_2x2(op.matrix());
  return eig_jacobi(op.matrix(), options);
}

void align_phases(const Eigensystem& reference, Eigensystem& target) {
  require_same_dim(reference.dim(), target.dim(), "align_phases");
  for (Eigen::Index n = 0; n < target.vectors.cols(); ++n) {
    const Complex ov = reference.vectors.col(n).dot(target.vectors.col(n));
    const double mag = std::abs(ov);
    if (mag > 0.0) target.vectors.col(n) *= std::conj(ov) / mag;
  }
}

SpectralFrame gauge_fix_continuity(SpectralFrame frame, double min_gap) {
  if (frame.times.size() != frame.systems.size()) throw UsageError("gauge_fix_continuity: times and systems differ in length");
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const RVector& ev = frame.systems[i].values;
    for (Eigen::Index n = 1; n < ev.size(); ++n) {
      if (ev(n) - ev(n - 1) <= min_gap) {
        std::ostringstream os;
        os << "gap collision at t=" << frame.times[i] << " between levels " << n - 1 << " and " << n
           << " (gap " << ev(n) - ev(n - 1) << ")";
        throw GapCollisionError(os.str());
      }
    }
  }
  if (frame.size() == 0) return frame;
  fix_leading_phase(frame.systems.front().vectors);
  for (std::size_t i = 1; i < frame.size(); ++i) align_phases(frame.systems[i - 1], frame.systems[i]);
  return frame;
}

}  // namespace qsl::qcore
