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

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace qsl {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

namespace qcore {

// Unit-norm complex amplitude vector of dimension >= 2.
class StateVector {
 public:
  // Normalizes the input. Throws UsageError for d < 2 or a zero vector.
  explicit StateVector(CVector amplitudes);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

  // Inner product <this|other>.
  Complex inner(const StateVector& other) const;

 private:
  CVector amps_;
};

enum class Representation { dense, two_by_two, diagonal };

// Square Hermitian matrix in energy units (hbar = 1).
class HermitianOperator {
 public:
  // Validates hermiticity to 1e-12 (relative to the largest entry when that
  // exceeds one) and stores the exactly symmetrized matrix.
  explicit HermitianOperator(CMatrix entries);

  static HermitianOperator diagonal(std::span<const double> values);
  static HermitianOperator zero(std::size_t dim);
  static HermitianOperator identity(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Representation representation() const { return rep_; }

  CVector apply(const CVector& v) const;

  HermitianOperator operator+(const HermitianOperator& rhs) const;
  HermitianOperator operator-(const HermitianOperator& rhs) const;
  HermitianOperator scaled(double factor) const;

 private:
  HermitianOperator(CMatrix entries, Representation rep) : m_(std::move(entries)), rep_(rep) {}

  CMatrix m_;
  Representation rep_;
};

// Pauli matrices as two_by_two operators.
HermitianOperator pauli_x();
HermitianOperator pauli_y();
HermitianOperator pauli_z();

// Eigenvalues ascending, eigenvectors as orthonormal columns.
struct Eigensystem {
  RVector values;
  CMatrix vectors;

  std::size_t dim() const { return static_cast<std::size_t>(values.size()); }
  CVector vector(std::size_t n) const { return vectors.col(static_cast<Eigen::Index>(n)); }
  double min_gap() const;
};

// Eigensystems on a time grid with a continuous eigenvector gauge.
struct SpectralFrame {
  std::vector<double> times;
  std::vector<Eigensystem> systems;

  std::size_t size() const { return times.size(); }
};

struct EigOptions {
  std::size_t max_dim = 4096;
  double off_diagonal_tol = 1e-12;
  int max_sweeps = 100;
};

// <psi|op|psi>; the imaginary part must vanish to 1e-10.
double expectation(const HermitianOperator& op, const StateVector& psi);

// sigma(op, psi) = sqrt(<op^2> - <op>^2), evaluated as ||(op - <op>) psi||.
double variance_sqrt(const HermitianOperator& op, const StateVector& psi);

// arccos |<a|b>| in [0, pi/2].
double fubini_angle(const StateVector& a, const StateVector& b);

struct OrthogonalComponent {
  StateVector perp;
  double sigma;
};

// Splits op|psi> = |psi><op> + |psi_perp> sigma. Throws
// DegenerateDecompositionError when sigma <= 1e-13.
OrthogonalComponent orthogonal_component(const HermitianOperator& op, const StateVector& psi);

// Closed form for 2x2, cyclic Jacobi otherwise.
Eigensystem eig_herm(const HermitianOperator& op, const EigOptions& options = {});

// Rephases eigenvectors so that consecutive overlaps <n(t_i)|n(t_{i+1})> are
// real and positive. The first frame is fixed by making the largest component
// of each eigenvector real positive.
SpectralFrame gauge_fix_continuity(SpectralFrame frame, double min_gap = 1e-10);

// Rephases the columns of `target` to have real positive overlap with `reference`.
void align_phases(const Eigensystem& reference, Eigensystem& target);

}  // namespace qcore
}  // namespace qsl
