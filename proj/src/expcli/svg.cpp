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

#include "qsl/expcli/svg.hpp"

#include "qsl/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qsl::expcli {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;
constexpr std::array<const char*, 6> kColors{"#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!(lo <= hi)) lo = 0, hi = 1;
    if (hi - lo < 1e-300) {
      const double pad = std::max(std::abs(lo) * 0.05, 1e-12);
      lo -= pad;
      hi += pad;
    }
  }
};

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

std::string tick_label(double v) {
  if (v == 0.0) return "0";
  const double a = std::abs(v);
  return (a >= 1e4 || a < 1e-3) ? fmt("%.1e", v) : fmt("%.4g", v);
}

}  // namespace

Chart chart_from(const Table& table, const std::string& x, const std::vector<std::string>& ys, std::string title) {
  Chart chart;
  chart.title = std::move(title);
  chart.x_label = x;
  chart.x = table.column(x);
  for (std::size_t i = 0; i < ys.size(); ++i) chart.series.push_back({ys[i], table.column(ys[i]), i % 2 == 1});
  return chart;
}

std::string render_svg(const Chart& chart) {
  auto tx = [&](double v) { return chart.log_axes ? std::log10(v) : v; };
  Range xr, yr;
  for (double v : chart.x) xr.add(tx(v));
  for (const auto& s : chart.series)
    for (double v : s.y) yr.add(tx(v));
  xr.settle();
  yr.settle();
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (tx(v) - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double v) { return kTop + ph - (tx(v) - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", kWidth) + "\" height=\"" +
         fmt("%.0f", kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out += "<text x=\"" + fmt("%.1f", kLeft + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"13\">" +
         escape(chart.title) + "</text>\n";
  out += "<rect x=\"" + fmt("%.1f", kLeft) + "\" y=\"" + fmt("%.1f", kTop) + "\" width=\"" + fmt("%.1f", pw) +
         "\" height=\"" + fmt("%.1f", ph) + "\" fill=\"none\" stroke=\"#000000\"/>\n";

  auto ticks = [&](const Range& r, bool horizontal) {
    const double step = nice_step(r.hi - r.lo);
    for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step) {
      const double shown = chart.log_axes ? std::pow(10.0, v) : v;
      const std::string label = tick_label(std::abs(v) < 1e-12 * step ? 0.0 : shown);
      if (horizontal) {
        const double x = kLeft + (v - r.lo) / (r.hi - r.lo) * pw;
        out += "<line x1=\"" + fmt("%.1f", x) + "\" y1=\"" + fmt("%.1f", kTop + ph) + "\" x2=\"" + fmt("%.1f", x) +
               "\" y2=\"" + fmt("%.1f", kTop + ph + 5) + "\" stroke=\"#000000\"/>\n";
        out += "<text x=\"" + fmt("%.1f", x) + "\" y=\"" + fmt("%.1f", kTop + ph + 18) +
               "\" text-anchor=\"middle\">" + label + "</text>\n";
      } else {
        const double y = kTop + ph - (v - r.lo) / (r.hi - r.lo) * ph;
        out += "<line x1=\"" + fmt("%.1f", kLeft - 5) + "\" y1=\"" + fmt("%.1f", y) + "\" x2=\"" +
               fmt("%.1f", kLeft) + "\" y2=\"" + fmt("%.1f", y) + "\" stroke=\"#000000\"/>\n";
        out += "<text x=\"" + fmt("%.1f", kLeft - 8) + "\" y=\"" + fmt("%.1f", y + 4) + "\" text-anchor=\"end\">" +
               label + "</text>\n";
      }
    }
  };
  ticks(xr, true);
  ticks(yr, false);
  out += "<text x=\"" + fmt("%.1f", kLeft + pw / 2) + "\" y=\"" + fmt("%.1f", kHeight - 15) +
         "\" text-anchor=\"middle\">" + escape(chart.x_label) + "</text>\n";
  if (!chart.y_label.empty())
    out += "<text x=\"16\" y=\"" + fmt("%.1f", kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           fmt("%.1f", kTop + ph / 2) + ")\">" + escape(chart.y_label) + "</text>\n";

  const std::size_t n = chart.x.size();
  const std::size_t stride = n > kMaxPolylinePoints ? (n + kMaxPolylinePoints - 1) / kMaxPolylinePoints : 1;
  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const ChartSeries& series = chart.series[s];
    const char* color = kColors[s % kColors.size()];
    std::string points;
    auto flush = [&] {
      if (points.empty()) return;
      out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.2\"" +
             (series.dashed ? " stroke-dasharray=\"5,3\"" : "") + " points=\"" + points + "\"/>\n";
      points.clear();
    };
    for (std::size_t i = 0; i < n && i < series.y.size(); i += stride) {
      if (series.markers) {
        if (std::isfinite(tx(series.y[i])) && std::isfinite(tx(chart.x[i])))
          out += "<circle cx=\"" + fmt("%.2f", px(chart.x[i])) + "\" cy=\"" + fmt("%.2f", py(series.y[i])) +
                 "\" r=\"1.6\" fill=\"" + color + "\"/>\n";
        continue;
      }
      if (!std::isfinite(tx(series.y[i])) || !std::isfinite(tx(chart.x[i]))) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += fmt("%.2f", px(chart.x[i])) + "," + fmt("%.2f", py(series.y[i]));
    }
    flush();
    const double ly = kTop + 14 + 18 * static_cast<double>(s);
    const double lx = kLeft + pw + 12;
    out += "<line x1=\"" + fmt("%.1f", lx) + "\" y1=\"" + fmt("%.1f", ly) + "\" x2=\"" + fmt("%.1f", lx + 24) +
           "\" y2=\"" + fmt("%.1f", ly) + "\" stroke=\"" + color + "\" stroke-width=\"1.2\"" +
           (series.dashed ? " stroke-dasharray=\"5,3\"" : "") + "/>\n";
    out += "<text x=\"" + fmt("%.1f", lx + 30) + "\" y=\"" + fmt("%.1f", ly + 4) + "\">" + escape(series.label) +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

void emit_svg(const Chart& chart, const std::filesystem::path& path) { write_file(path, render_svg(chart)); }

}  // namespace qsl::expcli
