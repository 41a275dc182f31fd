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

#include "qsl/schedules.hpp"

#include "qsl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace qsl::schedules {

namespace {

constexpr double kPi = std::numbers::pi;

// 53-bit uniform in (0, 1], independent of the standard library's distributions.
double unit_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::linear: return "linear";
    case ScheduleKind::boundary_flat: return "boundary_flat";
    case ScheduleKind::boundary_steep: return "boundary_steep";
    case ScheduleKind::piecewise_monotone: return "piecewise_monotone";
  }
  return "unknown";
}

Schedule::Schedule(ScheduleKind kind, double v0, double v1, double horizon)
    : kind_(kind), v0_(v0), v1_(v1), horizon_(horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw UsageError("Schedule: horizon must be positive");
}

Schedule Schedule::linear(double v0, double v1, double horizon) {
  return Schedule(ScheduleKind::linear, v0, v1, horizon);
}

Schedule Schedule::boundary_flat(double v0, double v1, double horizon) {
  return Schedule(ScheduleKind::boundary_flat, v0, v1, horizon);
}

Schedule Schedule::boundary_steep(double v0, double v1, double horizon) {
  return Schedule(ScheduleKind::boundary_steep, v0, v1, horizon);
}

Schedule Schedule::piecewise_monotone(std::vector<double> knots, double horizon) {
  if (knots.size() < 2) throw UsageError("Schedule: piecewise_monotone needs at least 2 knots");
  const double dir = knots.back() - knots.front();
  if (dir == 0.0) throw UsageError("Schedule: piecewise_monotone endpoints coincide");
  for (std::size_t j = 1; j < knots.size(); ++j)
    if ((knots[j] - knots[j - 1]) * dir <= 0.0) throw UsageError("Schedule: knots are not strictly monotone");
  Schedule s(ScheduleKind::piecewise_monotone, knots.front(), knots.back(), horizon);
  s.knots_ = std::move(knots);
  s.build_slopes();
  return s;
}

Schedule Schedule::of_kind(ScheduleKind kind, double v0, double v1, double horizon) {
  switch (kind) {
    case ScheduleKind::linear: return linear(v0, v1, horizon);
    case ScheduleKind::boundary_flat: return boundary_flat(v0, v1, horizon);
    case ScheduleKind::boundary_steep: return boundary_steep(v0, v1, horizon);
    case ScheduleKind::piecewise_monotone: break;
  }
  throw UsageError("Schedule::of_kind: piecewise_monotone needs knots");
}

Schedule Schedule::with_horizon(double horizon) const {
  Schedule s = *this;
  if (!(horizon > 0.0)) throw UsageError("Schedule: horizon must be positive");
  s.horizon_ = horizon;
  return s;
}

void Schedule::build_slopes() {
  // Fritsch-Carlson slopes on unit knot spacing.
  const std::size_t k = knots_.size();
  std::vector<double> secant(k - 1);
  for (std::size_t j = 0; j + 1 < k; ++j) secant[j] = knots_[j + 1] - knots_[j];
  slopes_.assign(k, 0.0);
  slopes_.front() = secant.front();
  slopes_.back() = secant.back();
  for (std::size_t j = 1; j + 1 < k; ++j) slopes_[j] = 0.5 * (secant[j - 1] + secant[j]);
  for (std::size_t j = 0; j + 1 < k; ++j) {
    const double a = slopes_[j] / secant[j];
    const double b = slopes_[j + 1] / secant[j];
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      slopes_[j] = tau * a * secant[j];
      slopes_[j + 1] = tau * b * secant[j];
    }
  }
}

double Schedule::unit_time(double t) const {
  const double slack = 1e-12 * horizon_;
  if (!(t >= -slack && t <= horizon_ + slack)) {
    std::ostringstream os;
    os << "Schedule: t=" << t << " outside [0, " << horizon_ << "]";
    throw UsageError(os.str());
  }
  return std::clamp(t / horizon_, 0.0, 1.0);
}

double Schedule::value(double t) const {
  const double u = unit_time(t);
  const double span = v1_ - v0_;
  switch (kind_) {
    case ScheduleKind::linear:
      if (u == 1.0) return v1_;
      return v0_ + span * u;
    case ScheduleKind::boundary_flat: {
      if (u == 1.0) return v1_;
      const double s = std::sin(0.5 * kPi * u);
      return v0_ + span * s * s;
    }
    case ScheduleKind::boundary_steep:
      if (u == 1.0) return v1_;
      return v0_ + span * (u + kSteepBoundaryStrength * std::sin(2.0 * kPi * u) / (2.0 * kPi));
    case ScheduleKind::piecewise_monotone: {
      const double x = u * static_cast<double>(knots_.size() - 1);
      const std::size_t j = std::min(static_cast<std::size_t>(x), knots_.size() - 2);
      const double s = x - static_cast<double>(j);
      const double s2 = s * s, s3 = s2 * s;
      return (2 * s3 - 3 * s2 + 1) * knots_[j] + (s3 - 2 * s2 + s) * slopes_[j] + (-2 * s3 + 3 * s2) * knots_[j + 1] +
             (s3 - s2) * slopes_[j + 1];
    }
  }
  return 0.0;
}

double Schedule::deriv(double t) const {
  const double u = unit_time(t);
  const double span = v1_ - v0_;
  switch (kind_) {
    case ScheduleKind::linear: return span / horizon_;
    case ScheduleKind::boundary_flat:
      return span * 0.5 * kPi * std::sin(kPi * u) / horizon_;
    case ScheduleKind::boundary_steep:
      return span * (1.0 + kSteepBoundaryStrength * std::cos(2.0 * kPi * u)) / horizon_;
    case ScheduleKind::piecewise_monotone: {
      const double scale = static_cast<double>(knots_.size() - 1);
      const double x = u * scale;
      const std::size_t j = std::min(static_cast<std::size_t>(x), knots_.size() - 2);
      const double s = x - static_cast<double>(j);
      const double s2 = s * s;
      const double dv = (6 * s2 - 6 * s) * knots_[j] + (3 * s2 - 4 * s + 1) * slopes_[j] +
                        (-6 * s2 + 6 * s) * knots_[j + 1] + (3 * s2 - 2 * s) * slopes_[j + 1];
      return dv * scale / horizon_;
    }
  }
  return 0.0;
}

double Schedule::deriv2(double t) const {
  const double u = unit_time(t);
  const double span = v1_ - v0_;
  const double inv_t2 = 1.0 / (horizon_ * horizon_);
  switch (kind_) {
    case ScheduleKind::linear: return 0.0;
    case ScheduleKind::boundary_flat:
      return span * 0.5 * kPi * kPi * std::cos(kPi * u) * inv_t2;
    case ScheduleKind::boundary_steep:
      return -span * 2.0 * kPi * kSteepBoundaryStrength * std::sin(2.0 * kPi * u) * inv_t2;
    case ScheduleKind::piecewise_monotone: {
      const double scale = static_cast<double>(knots_.size() - 1);
      const double x = u * scale;
      const std::size_t j = std::min(static_cast<std::size_t>(x), knots_.size() - 2);
      const double s = x - static_cast<double>(j);
      const double d2 = (12 * s - 6) * knots_[j] + (6 * s - 4) * slopes_[j] + (-12 * s + 6) * knots_[j + 1] +
                        (6 * s - 2) * slopes_[j + 1];
      return d2 * scale * scale * inv_t2;
    }
  }
  return 0.0;
}

std::string Schedule::describe() const {
  if (seed_) {
    std::ostringstream os;
    os << "random:" << *seed_ << ":" << knots_.size();
    return os.str();
  }
  return to_string(kind_);
}

Schedule random_monotone(std::uint64_t seed, double horizon, double v0, double v1, int n_knots) {
  if (n_knots < 2) throw UsageError("random_monotone: n_knots must be at least 2");
  std::mt19937_64 rng(seed);
  std::vector<double> cumulative(static_cast<std::size_t>(n_knots), 0.0);
  for (std::size_t j = 1; j < cumulative.size(); ++j) cumulative[j] = cumulative[j - 1] + unit_uniform(rng);
  const double total = cumulative.back();
  std::vector<double> knots(cumulative.size());
  for (std::size_t j = 0; j + 1 < knots.size(); ++j) knots[j] = v0 + (v1 - v0) * (cumulative[j] / total);
  knots.front() = v0;
  knots.back() = v1;
  Schedule s = Schedule::piecewise_monotone(std::move(knots), horizon);
  s.seed_ = seed;
  return s;
}

Schedule parse_schedule(const std::string& text, double v0, double v1, double horizon) {
  for (ScheduleKind kind : {ScheduleKind::linear, ScheduleKind::boundary_flat, ScheduleKind::boundary_steep})
    if (text == to_string(kind)) return Schedule::of_kind(kind, v0, v1, horizon);
  if (text.rfind("random:", 0) == 0) {
    std::istringstream is(text.substr(7));
    std::uint64_t seed = 0;
    char sep = 0;
    int n_knots = 8;
    if (!(is >> seed)) throw UsageError("schedule: bad random seed in '" + text + "'");
    if (is >> sep) {
      if (sep != ':' || !(is >> n_knots)) throw UsageError("schedule: bad knot count in '" + text + "'");
    }
    return random_monotone(seed, horizon, v0, v1, n_knots);
  }
  throw UsageError("schedule: unknown protocol '" + text + "'");
}

}  // namespace qsl::schedules
