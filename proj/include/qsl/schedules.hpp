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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qsl::schedules {

enum class ScheduleKind { linear, boundary_flat, boundary_steep, piecewise_monotone };

std::string to_string(ScheduleKind kind);

// Smooth scalar protocol on [0, T] with analytic first and second derivatives.
//
//   linear          v0 + (v1 - v0) u                        u = t / T
//   boundary_flat   v0 + (v1 - v0) sin^2(pi u / 2)           zero slope at both ends
//   boundary_steep  v0 + (v1 - v0) (u + k sin(2 pi u) / 2pi) slope (1 + k) at the ends,
//                                                            (1 - k) mid-sweep, k = 0.9
//   piecewise_monotone  Fritsch-Carlson monotone cubic through knots on a
//                       uniform grid (C1; second derivative piecewise)
class Schedule {
 public:
  static Schedule linear(double v0, double v1, double horizon);
  static Schedule boundary_flat(double v0, double v1, double horizon);
  static Schedule boundary_steep(double v0, double v1, double horizon);
  // Knots must be strictly monotone; first and last knot are the endpoints.
  static Schedule piecewise_monotone(std::vector<double> knots, double horizon);
  static Schedule of_kind(ScheduleKind kind, double v0, double v1, double horizon);

  ScheduleKind kind() const { return kind_; }
  double v0() const { return v0_; }
  double v1() const { return v1_; }
  double horizon() const { return horizon_; }
  const std::vector<double>& knots() const { return knots_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

  double value(double t) const;
  double deriv(double t) const;
  double deriv2(double t) const;

  // Same shape and endpoints, different horizon.
  Schedule with_horizon(double horizon) const;

  // Text form used in run-config files: "linear", "boundary_flat",
  // "boundary_steep" or "random:<seed>:<n_knots>".
  std::string describe() const;

 private:
  friend Schedule random_monotone(std::uint64_t, double, double, double, int);

  Schedule(ScheduleKind kind, double v0, double v1, double horizon);
  double unit_time(double t) const;
  void build_slopes();

  ScheduleKind kind_;
  double v0_, v1_, horizon_;
  std::vector<double> knots_;
  std::vector<double> slopes_;  // per knot, in value per unit of the knot index
  std::optional<std::uint64_t> seed_;
};

inline constexpr double kSteepBoundaryStrength = 0.9;

// n_knots - 1 positive increments drawn from a seeded mt19937_64 stream,
// accumulated from v0 towards v1. Same seed gives the same knots bit for bit.
Schedule random_monotone(std::uint64_t seed, double horizon, double v0, double v1, int n_knots = 8);

// Inverse of describe(); throws UsageError on unknown text.
Schedule parse_schedule(const std::string& text, double v0, double v1, double horizon);

}  // namespace qsl::schedules
