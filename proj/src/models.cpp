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

#include "qsl/errors.hpp"
#include "qsl/numerics.hpp"
#include "mp_real.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qsl::models {

namespace {

using detail::MpComplex;
using detail::MpReal;

constexpr double kPi = std::numbers::pi;

void require_grid_start(const TimeGrid& grid, const char* where) {
  if (grid.t0() != 0.0) {
    std::ostringstream os;
    os << where << ": grid must start at t=0 (got " << grid.t0() << ")";
    throw UsageError(os.str());
  }
}

// Per-mode field components and their time derivatives.
struct ModeField {
  double a, b, da, db;
};

ModeField mode_field(const TfimModel& m, double k, double t) {
  const double av = m.a.value(t), bv = m.b.value(t);
  const double dav = m.a.deriv(t), dbv = m.b.deriv(t);
  return {kModeFieldScale * (av - bv * std::cos(k)), kModeFieldScale * bv * std::sin(k),
          kModeFieldScale * (dav - dbv * std::cos(k)), kModeFieldScale * dbv * std::sin(k)};
}

Eigen::Matrix2cd mode_matrix(const ModeField& f) {
  Eigen::Matrix2cd out;
  out << Complex(f.a, 0.0), Complex(f.b, 0.0), Complex(f.b, 0.0), Complex(-f.a, 0.0);
  return out;
}

// Ground state of a tau_z + b tau_x.
Eigen::Vector2cd mode_ground(double theta) {
  return Eigen::Vector2cd(Complex(std::sin(0.5 * theta), 0.0), Complex(-std::cos(0.5 * theta), 0.0));
}

// Accumulators for one chunk of modes.
struct ChunkSums {
  std::vector<double> log_ad;
  std::vector<double> log_echo;
  std::vector<Complex> weak;
  std::vector<double> energy;
  std::vector<std::uint8_t> flagged;
};

}  // namespace

// ---------------------------------------------------------------------------

TwoLevelModel::TwoLevelModel(double field, Schedule protocol) : h(field), theta(std::move(protocol)) {
  if (!(h > 0.0)) throw UsageError("TwoLevelModel: field strength h must be positive");
}

HamiltonianFunction TwoLevelModel::hamiltonian() const {
  const double hh = h;
  const Schedule th = theta;
  auto value = [hh, th](double t) {
    const double a = th.value(t);
    return (qcore::pauli_z().scaled(std::cos(a)) + qcore::pauli_x().scaled(std::sin(a))).scaled(0.5 * hh);
  };
  auto deriv = [hh, th](double t) {
    const double a = th.value(t), da = th.deriv(t);
    return (qcore::pauli_z().scaled(-std::sin(a)) + qcore::pauli_x().scaled(std::cos(a))).scaled(0.5 * hh * da);
  };
  return HamiltonianFunction(2, value, deriv).with_domain(0.0, theta.horizon());
}

HermitianOperator TwoLevelModel::counterdiabatic(double t) const {
  return qcore::pauli_y().scaled(0.5 * theta.deriv(t));
}

TwoLevelRun two_level_run(const TwoLevelModel& model, const TimeGrid& grid, const TwoLevelOptions& options) {
  require_grid_start(grid, "two_level_run");
  const HamiltonianFunction h = model.hamiltonian();
  std::vector<Trajectory> basis = dynamics::evolved_basis(h, grid);
  Trajectory ad = dynamics::adiabatic_state(h, 0, grid);

  const std::size_t n = grid.size();
  std::vector<HermitianOperator> hs, hcd, h1;
  hs.reserve(n);
  hcd.reserve(n);
  h1.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.at(i);
    hs.push_back(h(t));
    hcd.push_back(model.counterdiabatic(t));
    h1.push_back(dynamics::moving_basis_decomposition(h, basis, i).h1);
  }
  const qcore::Eigensystem initial = qcore::eig_herm(hs.front());
  const Trajectory& psi = basis.front();

  BoundSeries series = bounds::theta_ad_series(psi, ad);
  series.add_bound("dE1_psi", bounds::delta_e1(psi, hcd));
  series.add_bound("dE1_ad", bounds::delta_e1(ad, hcd));
  series.add_bound("dE2", bounds::delta_e2(psi, hs, hcd, initial));
  series.add_bound("dE_inv", bounds::delta_e_inv(psi, h1, hcd, initial));
  if (options.with_adexp) series.add_bound("adexp", bounds::adexp_estimate(h, grid, 0));
  return {psi, std::move(ad), std::move(series)};
}

// ---------------------------------------------------------------------------

TfimModel::TfimModel(std::size_t n, Schedule a_protocol, Schedule b_protocol)
    : n_sites(n), a(std::move(a_protocol)), b(std::move(b_protocol)) {
  if (n_sites < 2 || n_sites % 2 != 0) throw UsageError("TfimModel: N must be an even integer >= 2");
  if (a.horizon() != b.horizon()) throw UsageError("TfimModel: A and B schedules have different horizons");
}

std::vector<double> TfimModel::momenta() const {
  std::vector<double> out(n_sites / 2);
  for (std::size_t m = 0; m < out.size(); ++m)
    out[m] = static_cast<double>(2 * m + 1) * kPi / static_cast<double>(n_sites);
  return out;
}

TfimMode tfim_mode(const TfimModel& model, double k, double t) {
  const ModeField f = mode_field(model, k, t);
  return {HermitianOperator(mode_matrix(f)), std::atan2(f.b, f.a)};
}

HamiltonianFunction tfim_mode_hamiltonian(const TfimModel& model, double k) {
  const TfimModel m = model;
  auto value = [m, k](double t) { return HermitianOperator(mode_matrix(mode_field(m, k, t))); };
  auto deriv = [m, k](double t) {
    const ModeField f = mode_field(m, k, t);
    return HermitianOperator(mode_matrix({f.da, f.db, 0.0, 0.0}));
  };
  return HamiltonianFunction(2, value, deriv).with_domain(0.0, model.a.horizon());
}

TfimSeries tfim_run(const TfimModel& model, const TimeGrid& grid) {
  require_grid_start(grid, "tfim_run");
  const std::vector<double> ks = model.momenta();
  const std::size_t n_points = grid.size();
  const std::size_t n_chunks = (ks.size() + kModeChunk - 1) / kModeChunk;
  std::vector<ChunkSums> chunks(n_chunks);

  numerics::parallel_for(n_chunks, [&](std::size_t c) {
    ChunkSums& acc = chunks[c];
    acc.log_ad.assign(n_points, 0.0);
    acc.log_echo.assign(n_points, 0.0);
    acc.weak.assign(n_points, Complex(0.0, 0.0));
    acc.energy.assign(n_points, 0.0);
    acc.flagged.assign(n_points, 0);
    const std::size_t end = std::min(ks.size(), (c + 1) * kModeChunk);
    for (std::size_t m = c * kModeChunk; m < end; ++m) {
      const double k = ks[m];
      const ModeField f0 = mode_field(model, k, 0.0);
      const Eigen::Vector2cd psi0 = mode_ground(std::atan2(f0.b, f0.a));
      auto h_at = [&](double t) { return mode_matrix(mode_field(model, k, t)); };
      dynamics::rk4_sweep(grid, psi0, h_at, [&](std::size_t i, double t, const Eigen::Vector2cd& raw) {
        const double norm = raw.norm();
        if (std::abs(norm - 1.0) > dynamics::kNormDriftTolerance) {
          std::ostringstream os;
          os << "tfim_run: mode k=" << k << " norm drift " << std::abs(norm - 1.0) << " at t=" << t
             << "; use more grid points";
          throw NormDriftError(os.str());
        }
        const Eigen::Vector2cd psi = raw / norm;
        const ModeField f = mode_field(model, k, t);
        const double r2 = f.a * f.a + f.b * f.b;
        const Eigen::Vector2cd ground = mode_ground(std::atan2(f.b, f.a));
        const Complex overlap = ground.dot(psi);
        const double dtheta = (f.a * f.db - f.b * f.da) / r2;
        // (dtheta/2) tau_y psi
        const Eigen::Vector2cd cd_psi(Complex(0.0, -0.5 * dtheta) * psi(1), Complex(0.0, 0.5 * dtheta) * psi(0));
        const bounds::WeakValue w = bounds::weak_value(ground.dot(cd_psi), overlap);
        acc.log_ad[i] += std::log(std::max(std::abs(overlap), std::numeric_limits<double>::min()));
        acc.log_echo[i] += std::log(std::max(std::abs(psi0.dot(psi)), std::numeric_limits<double>::min()));
        acc.weak[i] += w.value;
        acc.energy[i] -= std::sqrt(r2);
        acc.flagged[i] |= static_cast<std::uint8_t>(w.flagged);
      });
    }
  });

  const auto nd = static_cast<double>(model.n_sites);
  std::vector<double> g(n_points, 0.0), echo(n_points, 0.0), energy(n_points, 0.0), bound(n_points),
      weak_imag(n_points);
  std::vector<Complex> weak(n_points, Complex(0.0, 0.0));
  std::vector<std::uint8_t> flagged(n_points, 0);
  for (const ChunkSums& acc : chunks) {
    for (std::size_t i = 0; i < n_points; ++i) {
      g[i] += acc.log_ad[i];
      echo[i] += acc.log_echo[i];
      weak[i] += acc.weak[i];
      energy[i] += acc.energy[i];
      flagged[i] |= acc.flagged[i];
    }
  }
  for (std::size_t i = 0; i < n_points; ++i) {
    g[i] = -g[i] / nd;
    echo[i] = -echo[i] / nd;
    energy[i] /= nd;
    bound[i] = std::abs(weak[i]) / nd;
    weak_imag[i] = weak[i].imag() / nd;
  }
  return {bounds::assemble_rate_series(grid, model.n_sites, std::move(g), std::move(bound), std::move(flagged),
                                       std::move(weak_imag)),
          std::move(echo), std::move(energy)};
}

PeakInfo peak_abs(const std::vector<double>& values, const TimeGrid& grid) {
  if (values.empty() || values.size() != grid.size()) throw UsageError("peak_abs: series and grid sizes differ");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (std::abs(values[i]) > std::abs(values[best])) best = i;
  return {best, grid.at(best), std::abs(values[best])};
}

// ---------------------------------------------------------------------------

QuenchModel::QuenchModel(std::size_t n, double coupling, double field) : n_spins(n), J(coupling), h(field) {
  if (n_spins < 1) throw UsageError("QuenchModel: N must be positive");
  if (!std::isfinite(J) || !std::isfinite(h)) throw UsageError("QuenchModel: J and h must be finite");
}

std::vector<double> QuenchModel::energies() const {
  const auto nd = static_cast<double>(n_spins);
  std::vector<double> out(n_spins + 1);
  for (std::size_t k = 0; k <= n_spins; ++k) {
    const double m = magnetization(k);
    out[k] = -2.0 * (J * m * m / nd + h * m);
  }
  return out;
}

std::vector<double> QuenchModel::weights() const {
  const auto nd = static_cast<double>(n_spins);
  std::vector<double> out(n_spins + 1);
  for (std::size_t k = 0; k <= n_spins; ++k) {
    const auto kd = static_cast<double>(k);
    out[k] = std::exp(std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) -
                      nd * std::numbers::ln2);
  }
  return out;
}

StateVector QuenchModel::initial_state() const {
  const std::vector<double> w = weights();
  CVector amps(static_cast<Eigen::Index>(w.size()));
  for (std::size_t k = 0; k < w.size(); ++k) amps(static_cast<Eigen::Index>(k)) = std::sqrt(w[k]);
  return StateVector(std::move(amps));
}

double quench_e0(const QuenchModel& model) { return -0.5 * model.J; }

double quench_e0_direct(const QuenchModel& model) {
  const std::vector<double> w = model.weights();
  const std::vector<double> e = model.energies();
  double sum = 0.0, comp = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double y = w[k] * e[k] - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return sum;
}

namespace {

struct OverlapSums {
  Complex g;
  Complex k;
  double log_abs_g;
  bool exact_zero;
};

// G = sum w_k exp(-i E_k t), K = sum w_k E_k exp(-i E_k t) at `bits` precision.
// Returns false when |G| is not resolved to 2^-40 relative accuracy.
bool overlap_sums(const QuenchModel& model, double t, mpfr_prec_t bits, OverlapSums& out) {
  const std::size_t n = model.n_spins;
  const auto nd = static_cast<double>(n);
  MpReal s1(bits), s2(bits), tmp(bits), weight(bits, 1.0), energy(bits), phase(bits);
  MpComplex z(bits), r(bits), q(bits), next(bits), gsum(bits), ksum(bits), scaled(bits);

  mpfr_mul_2si(weight.get(), weight.get(), -static_cast<long>(n), MPFR_RNDN);

  // z_0 = exp(-i E_0 t), E_0 = -2 (J m0^2 / N + h m0), m0 = -N/2.
  auto energy_at = [&](MpReal& e, std::size_t k) {
    const double m = model.magnetization(k);  // exact half-integer
    mpfr_set_d(e.get(), m, MPFR_RNDN);
    mpfr_mul_d(tmp.get(), e.get(), m, MPFR_RNDN);
    mpfr_mul_d(tmp.get(), tmp.get(), model.J, MPFR_RNDN);
    mpfr_div_d(tmp.get(), tmp.get(), nd, MPFR_RNDN);
    mpfr_mul_d(e.get(), e.get(), model.h, MPFR_RNDN);
    mpfr_add(e.get(), e.get(), tmp.get(), MPFR_RNDN);
    mpfr_mul_si(e.get(), e.get(), -2, MPFR_RNDN);
  };
  energy_at(energy, 0);
  mpfr_mul_d(phase.get(), energy.get(), -t, MPFR_RNDN);
  detail::unit_phase(z, phase);
  // r_0 = exp(-i (E_1 - E_0) t), q = exp(i 4 J t / N).
  MpReal e1(bits);
  if (n >= 1) {
    energy_at(e1, 1);
    mpfr_sub(phase.get(), e1.get(), energy.get(), MPFR_RNDN);
    mpfr_mul_d(phase.get(), phase.get(), -t, MPFR_RNDN);
    detail::unit_phase(r, phase);
  }
  mpfr_set_d(phase.get(), 4.0 * t, MPFR_RNDN);
  mpfr_mul_d(phase.get(), phase.get(), model.J, MPFR_RNDN);
  mpfr_div_d(phase.get(), phase.get(), nd, MPFR_RNDN);
  detail::unit_phase(q, phase);

  double e_max = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) energy_at(energy, k);
    e_max = std::max(e_max, std::abs(energy.to_double()));
    detail::add_scaled(gsum, weight, z, tmp);
    mpfr_mul(s1.get(), weight.get(), energy.get(), MPFR_RNDN);
    detail::add_scaled(ksum, s1, z, tmp);
    if (k == n) break;
    detail::mul(next, z, r, s1, s2);
    detail::swap(z, next);
    detail::mul(next, r, q, s1, s2);
    detail::swap(r, next);
    mpfr_mul_ui(weight.get(), weight.get(), static_cast<unsigned long>(n - k), MPFR_RNDN);
    mpfr_div_ui(weight.get(), weight.get(), static_cast<unsigned long>(k + 1), MPFR_RNDN);
  }

  MpReal mag(bits);
  mpfr_hypot(mag.get(), gsum.re.get(), gsum.im.get(), MPFR_RNDN);
  out.exact_zero = mpfr_zero_p(mag.get()) != 0;
  // Rounding error of the sums is at most ~ (N + 1) * 16 * 2^-bits per unit of
  // weight; keep 40 clean bits beyond it for both G and K.
  MpReal threshold(bits, static_cast<double>(n + 1) * 16.0 * std::max(1.0, e_max));
  mpfr_mul_2si(threshold.get(), threshold.get(), 40 - static_cast<long>(bits), MPFR_RNDN);
  if (!out.exact_zero && mpfr_cmp(mag.get(), threshold.get()) <= 0) return false;

  if (out.exact_zero) {
    out.g = Complex(0.0, 0.0);
    out.k = Complex(0.0, 0.0);
    out.log_abs_g = -std::numeric_limits<double>::infinity();
    return true;
  }
  // Scale both sums by 1/|G| before rounding to double so tiny |G| stays finite.
  mpfr_log(tmp.get(), mag.get(), MPFR_RNDN);
  out.log_abs_g = tmp.to_double();
  auto scaled_double = [&](const MpComplex& v) {
    mpfr_div(s1.get(), v.re.get(), mag.get(), MPFR_RNDN);
    mpfr_div(s2.get(), v.im.get(), mag.get(), MPFR_RNDN);
    return Complex(s1.to_double(), s2.to_double());
  };
  out.g = scaled_double(gsum);  // unit modulus
  out.k = scaled_double(ksum);
  return true;
}

}  // namespace

QuenchPoint quench_point(const QuenchModel& model, double t) {
  constexpr mpfr_prec_t kStartBits = 128;
  constexpr mpfr_prec_t kMaxBits = 1 << 16;
  OverlapSums sums{};
  mpfr_prec_t bits = kStartBits;
  while (!overlap_sums(model, t, bits, sums)) {
    bits *= 2;
    if (bits > kMaxBits) {
      std::ostringstream os;
      os << "quench_point: overlap not resolved at t=" << t << " with " << kMaxBits << " bits";
      throw UnderflowError(os.str());
    }
  }
  const auto nd = static_cast<double>(model.n_spins);
  QuenchPoint out{};
  out.precision_bits = static_cast<long>(bits);
  out.log_abs_overlap = sums.log_abs_g;
  if (sums.exact_zero) {
    out.g = std::numeric_limits<double>::infinity();
    out.g_dot = std::numeric_limits<double>::quiet_NaN();
    out.weak = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    return out;
  }
  out.weak = sums.k / sums.g;
  out.g = -sums.log_abs_g / nd;
  out.g_dot = -out.weak.imag() / nd;
  return out;
}

std::vector<std::size_t> curvature_spikes(const std::vector<double>& series, double factor, std::size_t limit) {
  if (series.size() < 5) return {};
  std::vector<double> curv(series.size(), 0.0);
  for (std::size_t i = 1; i + 1 < series.size(); ++i)
    curv[i] = std::abs(series[i + 1] - 2.0 * series[i] + series[i - 1]);
  std::vector<double> finite;
  for (std::size_t i = 1; i + 1 < series.size(); ++i)
    if (std::isfinite(curv[i])) finite.push_back(curv[i]);
  if (finite.empty()) return {};
  std::nth_element(finite.begin(), finite.begin() + static_cast<std::ptrdiff_t>(finite.size() / 2), finite.end());
  const double median = finite[finite.size() / 2];
  std::vector<std::size_t> peaks;
  for (std::size_t i = 2; i + 2 < series.size(); ++i) {
    if (!std::isfinite(curv[i])) continue;
    if (curv[i] > factor * median && curv[i] >= curv[i - 1] && curv[i] > curv[i + 1]) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return curv[a] > curv[b]; });
  if (peaks.size() > limit) peaks.resize(limit);
  return peaks;
}

QuenchSeries quench_run(const QuenchModel& model, const TimeGrid& grid) {
  const std::size_t n = grid.size();
  std::vector<QuenchPoint> points(n);
  numerics::parallel_for(n, [&](std::size_t i) { points[i] = quench_point(model, grid.at(i)); });

  const auto nd = static_cast<double>(model.n_spins);
  const double e0 = quench_e0(model);
  QuenchSeries out{bounds::RateSeries{grid, model.n_spins, {}, {}, {}, {}, {}}, {}, {}, {}, {}, {}, 0};
  bounds::RateSeries& rate = out.rate;
  rate.g.resize(n);
  rate.g_dot.resize(n);
  rate.bound.resize(n);
  rate.flagged.assign(n, 0);
  rate.weak_imag.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const QuenchPoint& p = points[i];
    out.max_precision_bits = std::max(out.max_precision_bits, p.precision_bits);
    rate.g[i] = p.g;
    rate.g_dot[i] = p.g_dot;
    rate.weak_imag[i] = -p.weak.imag() / nd;
    rate.bound[i] = std::abs(p.weak - e0) / nd;
    // Zero crossing: an isolated dip of |G| by twelve orders below its neighbours.
    bool dip = !std::isfinite(p.log_abs_overlap);
    const double rel = std::log(bounds::kZeroOverlap);
    if (!dip && i > 0 && i + 1 < n)
      dip = p.log_abs_overlap - std::min(points[i - 1].log_abs_overlap, points[i + 1].log_abs_overlap) < rel;
    rate.flagged[i] = dip;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (rate.flagged[i]) rate.bound[i] = std::numeric_limits<double>::quiet_NaN();

  auto running = [&](auto&& value_at) {
    std::vector<double> acc(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
      const double a = value_at(i - 1), b = value_at(i);
      const double step = (std::isfinite(a) && std::isfinite(b)) ? 0.5 * grid.dt() * (a + b) : 0.0;
      acc[i] = acc[i - 1] + step;
    }
    return acc;
  };
  out.int_g_dot = running([&](std::size_t i) { return rate.g_dot[i]; });
  out.int_abs_g_dot = running([&](std::size_t i) { return std::abs(rate.g_dot[i]); });
  out.int_bound = running([&](std::size_t i) { return rate.bound[i]; });

  out.kinks = curvature_spikes(rate.g_dot);
  for (std::size_t i : out.kinks) {
    const double c = std::abs(rate.g_dot[i + 1] - 2.0 * rate.g_dot[i] + rate.g_dot[i - 1]);
    out.kink_strength.push_back(c);
  }
  return out;
}

}  // namespace qsl::models
