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

#include "qsl/models.hpp"
#include "support/dense_tfim.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace qsl::models {
namespace {

using schedules::Schedule;

class TfimOracle : public ::testing::TestWithParam<std::size_t> {};

TEST_P(TfimOracle, GroundEnergyMatchesDenseChain) {
  const std::size_t n = GetParam();
  const double horizon = 10.0;
  const TfimModel model(n, Schedule::linear(1.0, 0.0, horizon), Schedule::linear(0.0, 1.0, horizon));
  const dynamics::TimeGrid grid(0.0, horizon, 1001);
  const TfimSeries s = tfim_run(model, grid);
  for (std::size_t i = 0; i + 1 < grid.size(); i += 100) {
    const double t = grid.at(i);
    const auto dense = testing::dense_even_ground(n, model.a.value(t), model.b.value(t));
    EXPECT_NEAR(s.ground_energy_per_site[i], dense.energy / static_cast<double>(n), 1e-12) << "t=" << t;
  }
}

INSTANTIATE_TEST_SUITE_P(Chains, TfimOracle, ::testing::Values(4, 6, 8));

class TfimDynamicsOracle : public ::testing::TestWithParam<std::size_t> {};

TEST_P(TfimDynamicsOracle, FidelityAndEchoMatchDenseEvolution) {
  const std::size_t n = GetParam();
  const double horizon = 10.0;
  const Schedule a = Schedule::boundary_flat(1.0, 0.0, horizon);
  const Schedule b = Schedule::boundary_flat(0.0, 1.0, horizon);
  const dynamics::TimeGrid grid(0.0, horizon, 2001);
  const TfimSeries s = tfim_run(TfimModel(n, a, b), grid);
  const testing::DenseTrace dense = testing::dense_tfim_trace(n, a, b, grid, 2);
  const auto nd = static_cast<double>(n);
  for (std::size_t i = 0; i < grid.size(); i += 20) {
    EXPECT_NEAR(s.adiabatic.g[i], -std::log(dense.fidelity[i]) / nd, 1e-8) << "t=" << grid.at(i);
    EXPECT_NEAR(s.g_loschmidt[i], -std::log(dense.echo[i]) / nd, 1e-8) << "t=" << grid.at(i);
  }
}

INSTANTIATE_TEST_SUITE_P(Chains, TfimDynamicsOracle, ::testing::Values(4, 6));

}  // namespace
}  // namespace qsl::models
