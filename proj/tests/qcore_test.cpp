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

#include "qsl/errors.hpp"
#include "qsl/qcore.hpp"
#include "support/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace qsl::qcore {
namespace {

using testing::random_hermitian;
using testing::random_state;

StateVector ket(std::initializer_list<Complex> amps) {
  CVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (Complex a : amps) v(i++) = a;
  return StateVector(v);
}

TEST(StateVector, NormalizesOnConstruction) {
  const StateVector s = ket({3.0, 4.0});
  EXPECT_NEAR(s.amplitudes().norm(), 1.0, 1e-12);
  EXPECT_NEAR(s[0].real(), 0.6, 1e-15);
}

TEST(StateVector, RejectsDegenerateInput) {
  EXPECT_THROW(ket({1.0}), UsageError);
  EXPECT_THROW(ket({0.0, 0.0}), UsageError);
}

TEST(HermitianOperator, RejectsNonHermitian) {
  CMatrix m(2, 2);
  m << 1.0, 2.0, 3.0, 1.0;
  EXPECT_THROW(HermitianOperator{m}, UsageError);
}

TEST(HermitianOperator, DiagonalStoresReals) {
  const double e[] = {1.0, -2.0, 0.5};
  const HermitianOperator d = HermitianOperator::diagonal(e);
  EXPECT_EQ(d.representation(), Representation::diagonal);
  const StateVector psi = ket({1.0, 1.0, 1.0});
  EXPECT_NEAR(expectation(d, psi), (1.0 - 2.0 + 0.5) / 3.0, 1e-15);
}

TEST(Expectation, PauliZExamples) {
  EXPECT_DOUBLE_EQ(expectation(pauli_z(), ket({1.0, 0.0})), 1.0);
  EXPECT_NEAR(expectation(pauli_z(), ket({1.0, 1.0})), 0.0, 1e-16);
}

TEST(Expectation, MatchesDoubleLoop) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const HermitianOperator h = random_hermitian(4, rng);
    const StateVector psi = random_state(4, rng);
    Complex sum = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) sum += std::conj(psi[i]) * h.matrix()(i, j) * psi[j];
    EXPECT_NEAR(expectation(h, psi), sum.real(), 1e-12);
  }
}

TEST(Expectation, DimensionMismatch) {
  EXPECT_THROW(expectation(pauli_z(), ket({1.0, 0.0, 0.0})), UsageError);
}

TEST(VarianceSqrt, Examples) {
  EXPECT_DOUBLE_EQ(variance_sqrt(pauli_z(), ket({1.0, 0.0})), 0.0);
  EXPECT_NEAR(variance_sqrt(pauli_z(), ket({1.0, 1.0})), 1.0, 1e-15);
  const double thetadot = -std::numbers::pi / 100.0;
  EXPECT_NEAR(variance_sqrt(pauli_y().scaled(thetadot / 2), ket({0.3, -0.8})), std::numbers::pi / 200.0, 1e-15);
}

TEST(VarianceSqrt, SpectralRadiusBound) {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::Index d = 2 + rep % 7;
    const HermitianOperator h = random_hermitian(d, rng);
    const Eigensystem e = eig_herm(h);
    const double s = variance_sqrt(h, random_state(d, rng));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 0.5 * (e.values(d - 1) - e.values(0)) + 1e-12);
  }
}

TEST(FubiniAngle, Examples) {
  const StateVector a = ket({1.0, 0.0});
  EXPECT_DOUBLE_EQ(fubini_angle(a, a), 0.0);
  EXPECT_NEAR(fubini_angle(a, ket({0.0, 1.0})), std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(fubini_angle(a, ket({0.6, 0.8})), 0.9272952180016122, 1e-14);
}

TEST(FubiniAngle, SymmetricAndPhaseInvariant) {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const StateVector a = random_state(5, rng), b = random_state(5, rng);
    const StateVector b_phase(std::polar(1.0, 0.7 * rep) * b.amplitudes());
    EXPECT_NEAR(fubini_angle(a, b), fubini_angle(b, a), 1e-14);
    EXPECT_NEAR(fubini_angle(a, b), fubini_angle(a, b_phase), 1e-14);
  }
}

TEST(OrthogonalComponent, Examples) {
  const OrthogonalComponent z = orthogonal_component(pauli_z(), ket({1.0, 1.0}));
  EXPECT_NEAR(z.sigma, 1.0, 1e-15);
  EXPECT_NEAR(std::abs(z.perp.inner(ket({1.0, -1.0}))), 1.0, 1e-15);
  const OrthogonalComponent x = orthogonal_component(pauli_x(), ket({1.0, 0.0}));
  EXPECT_NEAR(x.sigma, 1.0, 1e-15);
  EXPECT_NEAR(std::abs(x.perp[1]), 1.0, 1e-15);
}

TEST(OrthogonalComponent, ReconstructionResidual) {
  std::mt19937_64 rng(14);
  for (Eigen::Index d = 2; d <= 16; ++d) {
    const HermitianOperator h = random_hermitian(d, rng);
    const StateVector psi = random_state(d, rng);
    const OrthogonalComponent oc = orthogonal_component(h, psi);
    const CVector rebuilt = expectation(h, psi) * psi.amplitudes() + oc.sigma * oc.perp.amplitudes();
    EXPECT_LT((h.apply(psi.amplitudes()) - rebuilt).norm(), 1e-10);
    EXPECT_LT(std::abs(psi.inner(oc.perp)), 1e-10);
  }
}

TEST(OrthogonalComponent, VanishingVarianceIsAnError) {
  EXPECT_THROW(orthogonal_component(pauli_z(), ket({1.0, 0.0})), DegenerateDecompositionError);
}

TEST(EigHerm, PauliZ) {
  const Eigensystem e = eig_herm(pauli_z());
  EXPECT_DOUBLE_EQ(e.values(0), -1.0);
  EXPECT_DOUBLE_EQ(e.values(1), 1.0);
}

TEST(EigHerm, TwoLevelSpectrumIsFixed) {
  for (double theta = 0.0; theta <= std::numbers::pi; theta += 0.1) {
    const HermitianOperator h = (pauli_z().scaled(std::cos(theta)) + pauli_x().scaled(std::sin(theta))).scaled(0.35);
    const Eigensystem e = eig_herm(h);
    EXPECT_NEAR(e.values(0), -0.35, 1e-15);
    EXPECT_NEAR(e.values(1), 0.35, 1e-15);
  }
}

TEST(EigHerm, ResidualAndOrthonormality) {
  std::mt19937_64 rng(15);
  for (Eigen::Index d : {3, 5, 8, 16, 40}) {
    const HermitianOperator h = random_hermitian(d, rng);
    const Eigensystem e = eig_herm(h);
    for (Eigen::Index n = 0; n < d; ++n) {
      EXPECT_LT((h.matrix() * e.vectors.col(n) - e.values(n) * e.vectors.col(n)).norm(), 1e-10);
      if (n > 0) EXPECT_LE(e.values(n - 1), e.values(n));
    }
    EXPECT_LT((e.vectors.adjoint() * e.vectors - CMatrix::Identity(d, d)).norm(), 1e-10);
  }
}

TEST(EigHerm, UnitaryInvariance) {
  std::mt19937_64 rng(16);
  const HermitianOperator h = random_hermitian(6, rng);
  const CMatrix u = eig_herm(random_hermitian(6, rng)).vectors;
  const HermitianOperator rotated(u * h.matrix() * u.adjoint());
  EXPECT_LT((eig_herm(h).values - eig_herm(rotated).values).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(EigHerm, IterationCapIsDiagnosed) {
  std::mt19937_64 rng(17);
  EigOptions tight;
  tight.max_sweeps = 1;
  EXPECT_THROW(eig_herm(random_hermitian(12, rng), tight), NonConvergenceError);
}

TEST(EigHerm, DimensionCap) {
  EigOptions small;
  small.max_dim = 4;
  std::mt19937_64 rng(18);
  EXPECT_THROW(eig_herm(random_hermitian(5, rng), small), UsageError);
}

SpectralFrame frame_of(const std::vector<HermitianOperator>& ops) {
  SpectralFrame f;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    f.times.push_back(static_cast<double>(i));
    f.systems.push_back(eig_herm(ops[i]));
  }
  return f;
}

TEST(GaugeFix, ConstantHamiltonianGivesConstantVectors) {
  std::mt19937_64 rng(19);
  const HermitianOperator h = random_hermitian(4, rng);
  SpectralFrame f = frame_of(std::vector<HermitianOperator>(5, h));
  for (std::size_t i = 1; i < f.size(); ++i) f.systems[i].vectors *= std::polar(1.0, 0.9 * static_cast<double>(i));
  const SpectralFrame fixed = gauge_fix_continuity(f);
  for (std::size_t i = 1; i < fixed.size(); ++i)
    EXPECT_LT((fixed.systems[i].vectors - fixed.systems[0].vectors).norm(), 1e-12);
}

TEST(GaugeFix, AlternatingSignsAreRemoved) {
  std::vector<HermitianOperator> ops;
  for (int i = 0; i < 20; ++i) {
    const double th = 0.05 * i;
    ops.push_back(pauli_z().scaled(std::cos(th)) + pauli_x().scaled(std::sin(th)));
  }
  SpectralFrame f = frame_of(ops);
  for (std::size_t i = 0; i < f.size(); i += 2) f.systems[i].vectors *= -1.0;
  const SpectralFrame fixed = gauge_fix_continuity(f);
  for (std::size_t i = 0; i + 1 < fixed.size(); ++i)
    for (std::size_t n = 0; n < 2; ++n) {
      const Complex ov = fixed.systems[i].vector(n).dot(fixed.systems[i + 1].vector(n));
      EXPECT_GT(ov.real(), 0.0);
      EXPECT_NEAR(ov.imag(), 0.0, 1e-14);
    }
}

TEST(GaugeFix, DegeneracyNamesTimeAndLevels) {
  const double e[] = {1.0, 1.0};
  SpectralFrame f = frame_of({HermitianOperator::diagonal(e)});
  try {
    gauge_fix_continuity(f);
    FAIL() << "expected GapCollisionError";
  } catch (const GapCollisionError& err) {
    const std::string what = err.what();
    EXPECT_NE(what.find("t=0"), std::string::npos) << what;
    EXPECT_NE(what.find("0"), std::string::npos);
  }
}

}  // namespace
}  // namespace qsl::qcore
