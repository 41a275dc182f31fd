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

#include "qsl/expcli/table.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace qsl::expcli {

struct ChartSeries {
  std::string label;
  std::vector<double> y;
  bool dashed = false;
  bool markers = false;  // points instead of a line
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<ChartSeries> series;
  bool log_axes = false;
};

// Plots `ys` against `x` from a table.
Chart chart_from(const Table& table, const std::string& x, const std::vector<std::string>& ys, std::string title);

// Self-contained SVG line chart: axes, ticks with labels, legend. Series longer
// than kMaxPolylinePoints are decimated with a fixed stride.
inline constexpr std::size_t kMaxPolylinePoints = 2000;
std::string render_svg(const Chart& chart);
void emit_svg(const Chart& chart, const std::filesystem::path& path);

}  // namespace qsl::expcli
