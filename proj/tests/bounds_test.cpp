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
#include "qsl/models.hpp"
#include "support/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace qsl::bounds {
namespace {

using qcore::pauli_x;
using qcore::pauli_z;
using testing::random_hermitian;
using testing::random_state;

HamiltonianFunction constant(const HermitianOperator& op) {
  return HamiltonianFunction(op.dim(), [op](double) { return op; });
}

HermitianOperator quench_hamiltonian(const models::QuenchModel& m) {
  const std::vector<double> e = m.energies();
  return HermitianOperator::diagonal(e);
}

TEST(MtBound, SaturatedByRabiQuarterTurn) {
  const TimeGrid grid(0.0, std::numbers::pi / 4, 2001);
  const HamiltonianFunction h = constant(pauli_x());
  const Trajectory traj = dynamics::propagate(h, StateVector(CVector::Unit(2, 0)), grid);
  const MtResult r = mt_bound(traj, h);
  EXPECT_NEAR(r.lhs, std::numbers::pi / 4, 1e-10);
  EXPECT_NEAR(r.rhs, std::numbers::pi / 4, 1e-10);
}

TEST(MtBound, HoldsForRandomHamiltonians) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::Index d = 2 + rep % 5;
    const HamiltonianFunction h = constant(random_hermitian(d, rng));
    const Trajectory traj = dynamics::propagate(h, random_state(d, rng), TimeGrid(0.0, 1.0, 2001));
    EXPECT_LE(mt_bound(traj, h).violation(), 1e-10);
  }
}

TEST(ThetaAd, ZeroWhenStateFollowsAdiabatically) {
  std::mt19937_64 rng(22);
  const HamiltonianFunction h = constant(random_hermitian(3, rng));
  const TimeGrid grid(0.0, 2.0, 401);
  const Trajectory ad = dynamics::adiabatic_state(h, 0, grid);
  const Trajectory traj = dynamics::propagate(h, ad.front(), grid);
  const BoundSeries s = theta_ad_series(traj, ad);
  for (double v : s.theta_ad) EXPECT_LT(v, 1e-6);
  EXPECT_LT(s.integral("abs_dtheta_ad"), 1e-6);
}

TEST(DeltaE2, RequiresEigenstateStart) {
  const TimeGrid grid(0.0, 1.0, 101);
  const HamiltonianFunction h = constant(pauli_z());
  const Trajectory traj = dynamics::propagate(h, StateVector(CVector::Ones(2)), grid);
  const std::vector<HermitianOperator> hs(grid.size(), pauli_z());
  const std::vector<HermitianOperator> zero(grid.size(), HermitianOperator::zero(2));
  EXPECT_THROW(delta_e2(traj, hs, zero, qcore::eig_herm(pauli_z())), ContractError);
}

TEST(BoundSeries, IntegralsAreTrapezoidal) {
  BoundSeries s{TimeGrid(0.0, 1.0, 3), {}, {}, {}, {}, {}};
  s.add_bound("x", {1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(s.integral("x"), 2.0);
  EXPECT_THROW(s.bound("missing"), UsageError);
}

TEST(WeakValue, FlagsVanishingOverlap) {
  EXPECT_TRUE(weak_value(1.0, 1e-13).flagged);
  const WeakValue w = weak_value(Complex(0.0, 2.0), Complex(2.0, 0.0));
  EXPECT_FALSE(w.flagged);
  EXPECT_EQ(w.value, Complex(0.0, 1.0));
}

TEST(RateBound, QuenchPerpBoundHoldsAtFiftySpins) {
  const models::QuenchModel m(50, 1.0, 1.0);
  const HamiltonianFunction h = constant(quench_hamiltonian(m));
  const TimeGrid grid(0.0, 1.0, 20001);
  const Trajectory traj = dynamics::propagate(h, m.initial_state(), grid);
  const RateSeries perp = rate_bound_perp(traj, h, 50);
  EXPECT_LE(perp.max_violation(), kBoundTolerance);

  const HermitianOperator centred = quench_hamiltonian(m) - HermitianOperator::identity(51).scaled(models::quench_e0(m));
  const std::vector<HermitianOperator> hs(grid.size(), centred);
  const RateSeries weak = rate_bound_weak_initial(traj, hs, 50);
  EXPECT_LE(weak.max_violation(), kBoundTolerance);
  EXPECT_LT(weak.max_identity_deviation(), 1e-6);
  for (std::size_t i = 0; i < grid.size(); i += 1000) EXPECT_NEAR(perp.bound[i], weak.bound[i], 1e-9);
}

TEST(RateBound, FreePrecessionSaturates) {
  const double field = 0.7;
  const models::QuenchModel m(6, 0.0, field);
  const HamiltonianFunction h = constant(quench_hamiltonian(m));
  const TimeGrid grid(0.0, 1.0, 4001);
  const Trajectory traj = dynamics::propagate(h, m.initial_state(), grid);
  const RateSeries r = rate_bound_perp(traj, h, 6);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double expected = field * std::tan(field * grid.at(i));
    EXPECT_NEAR(r.bound[i], expected, 1e-9);
    EXPECT_NEAR(r.g_dot[i], expected, 1e-6);
  }
}

TEST(RateBound, InvariantUnderEnergyShiftAndGlobalPhase) {
  std::mt19937_64 rng(23);
  const HermitianOperator op = random_hermitian(4, rng);
  const TimeGrid grid(0.0, 1.5, 1501);
  const StateVector psi0 = random_state(4, rng);
  const Trajectory traj = dynamics::propagate(constant(op), psi0, grid);
  const RateSeries base = rate_bound_perp(traj, constant(op), 1);
  const HermitianOperator shifted = op + HermitianOperator::identity(4).scaled(3.5);
  const RateSeries moved = rate_bound_perp(traj, constant(shifted), 1);
  Trajectory rephased = traj;
  for (auto& s : rephased.states) s = StateVector(std::polar(1.0, 1.1) * s.amplitudes());
  const RateSeries phased = rate_bound_perp(rephased, constant(op), 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(base.bound[i], moved.bound[i], 1e-10);
    EXPECT_NEAR(base.bound[i], phased.bound[i], 1e-10);
  }
}

TEST(AssembleRateSeries, FlaggedPointsAreExcluded) {
  const TimeGrid grid(0.0, 1.5, 7);
  const RateSeries r = assemble_rate_series(grid, 1, {0.0, 0.0, 0.1, 5.0, 0.1, 0.0, 0.0},
                                            {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, {0, 0, 0, 1, 0, 0, 0});
  EXPECT_TRUE(std::isnan(r.bound[3]));
  for (std::size_t i = 1; i <= 5; ++i) EXPECT_TRUE(r.excluded(i)) << i;
  EXPECT_FALSE(r.excluded(0));
  EXPECT_FALSE(r.excluded(6));
  EXPECT_NEAR(r.max_violation(), 0.2, 1e-12);
}

}  // namespace
}  // namespace qsl::bounds
