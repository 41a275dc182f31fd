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
#include <functional>
#include <span>
#include <vector>

namespace qsl::numerics {

// Composite trapezoidal rule on a uniform grid, summed left to right.
double trapezoid(std::span<const double> values, double dt);

// Running trapezoidal integral; out[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> values, double dt);

// Second-order derivative estimate: central differences in the interior,
// second-order one-sided stencils at both ends. Needs at least 3 samples.
std::vector<double> central_difference(std::span<const double> values, double dt);

// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads. Each index
// is handled exactly once; callers write results into per-index slots so the
// output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace qsl::numerics
