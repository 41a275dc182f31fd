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

#include "qsl/expcli/fit.hpp"

#include "qsl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qsl::expcli {

FitResult powerlaw_fit(std::span<const double> n, std::span<const double> value) {
  if (n.size() != value.size()) throw UsageError("powerlaw_fit: n and value lengths differ");
  if (n.size() < kMinFitPoints) {
    std::ostringstream os;
    os << "powerlaw_fit: need at least " << kMinFitPoints << " points, got " << n.size();
    throw UsageError(os.str());
  }
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(value[i] > 0.0)) {
      std::ostringstream os;
      os << "powerlaw_fit: nonpositive entry at index " << i << " (n=" << n[i] << ", value=" << value[i] << ")";
      throw DomainError(os.str());
    }
  }
  const auto m = static_cast<double>(n.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    sx += std::log(n[i]);
    sy += std::log(value[i]);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double dx = std::log(n[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(value[i]) - my);
  }
  if (!(sxx > 0.0)) throw DomainError("powerlaw_fit: all n values coincide");
  FitResult out{};
  out.alpha = sxy / sxx;
  out.intercept = my - out.alpha * mx;
  for (std::size_t i = 0; i < n.size(); ++i)
    out.residual =
        std::max(out.residual, std::abs(std::log(value[i]) - (out.intercept + out.alpha * std::log(n[i]))));
  out.n_lo = *std::min_element(n.begin(), n.end());
  out.n_hi = *std::max_element(n.begin(), n.end());
  out.count = n.size();
  return out;
}

FitResult powerlaw_fit(std::span<const double> n, std::span<const double> value, double n_lo, double n_hi) {
  if (n.size() != value.size()) throw UsageError("powerlaw_fit: n and value lengths differ");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] >= n_lo && n[i] <= n_hi) {
      xs.push_back(n[i]);
      ys.push_back(value[i]);
    }
  }
  return powerlaw_fit(xs, ys);
}

std::vector<FitResult> window_study(std::span<const double> n, std::span<const double> value,
                                    std::size_t min_points) {
  std::vector<FitResult> out;
  min_points = std::max(min_points, kMinFitPoints);
  for (std::size_t lo = 0; lo + min_points <= n.size(); ++lo)
    for (std::size_t len = min_points; lo + len <= n.size(); ++len)
      out.push_back(powerlaw_fit(n.subspan(lo, len), value.subspan(lo, len)));
  return out;
}

}  // namespace qsl::expcli
