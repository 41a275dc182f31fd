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

#include "qsl/numerics.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qsl::numerics {
namespace {

std::vector<double> sample(double (*f)(double), double t0, double dt, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(t0 + dt * static_cast<double>(i));
  return v;
}

TEST(Trapezoid, ExactForLinear) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(trapezoid(v, 0.5), 3.75);
}

TEST(Trapezoid, SecondOrderConvergence) {
  const double pi = std::numbers::pi;
  const double e1 = std::abs(trapezoid(sample([](double t) { return std::sin(t); }, 0.0, pi / 100, 101), pi / 100) - 2.0);
  const double e2 = std::abs(trapezoid(sample([](double t) { return std::sin(t); }, 0.0, pi / 200, 201), pi / 200) - 2.0);
  EXPECT_NEAR(e1 / e2, 4.0, 0.01);
}

TEST(CumulativeTrapezoid, EndsAtTotal) {
  const auto v = sample([](double t) { return t * t; }, 0.0, 0.01, 101);
  const auto c = cumulative_trapezoid(v, 0.01);
  ASSERT_EQ(c.size(), v.size());
  EXPECT_EQ(c.front(), 0.0);
  EXPECT_DOUBLE_EQ(c.back(), trapezoid(v, 0.01));
}

TEST(CentralDifference, QuadraticIsExactEverywhere) {
  const auto v = sample([](double t) { return 3.0 * t * t - t; }, 1.0, 0.1, 11);
  const auto d = central_difference(v, 0.1);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(d[i], 6.0 * (1.0 + 0.1 * static_cast<double>(i)) - 1.0, 1e-12);
}

TEST(ParallelFor, VisitsEachIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("seven");
               }),
               std::runtime_error);
}

}  // namespace
}  // namespace qsl::numerics
