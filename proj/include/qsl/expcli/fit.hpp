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

#include <cstddef>
#include <span>
#include <vector>

namespace qsl::expcli {

struct FitResult {
  double alpha;      // exponent
  double intercept;  // ln prefactor
  double residual;   // max |ln value - fit|
  double n_lo;       // window used
  double n_hi;
  std::size_t count;
};

inline constexpr std::size_t kMinFitPoints = 4;

// Least squares of ln value against ln n. Throws DomainError for nonpositive
// input and UsageError for fewer than kMinFitPoints points.
FitResult powerlaw_fit(std::span<const double> n, std::span<const double> value);

// Same, restricted to points with n_lo <= n <= n_hi.
FitResult powerlaw_fit(std::span<const double> n, std::span<const double> value, double n_lo, double n_hi);

// Fits over every contiguous window of at least min_points entries, ordered by
// window start then length.
std::vector<FitResult> window_study(std::span<const double> n, std::span<const double> value,
                                    std::size_t min_points = kMinFitPoints);

}  // namespace qsl::expcli
