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

#include "qsl/errors.hpp"
#include "qsl/expcli/config.hpp"
#include "qsl/expcli/experiments.hpp"
#include "qsl/expcli/fit.hpp"
#include "qsl/expcli/svg.hpp"
#include "qsl/expcli/table.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

namespace qsl::expcli {
namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("qslab_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

TEST(Csv, RoundTripIsExact) {
  Table t;
  t.add("t", {0.0, 0.1, 1.0 / 3.0});
  t.add("v", {-1e-300, std::numeric_limits<double>::infinity(), std::nan("")});
  const std::string text = format_csv(t);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  const Table back = parse_csv(text);
  ASSERT_EQ(back.names, t.names);
  EXPECT_EQ(back.column("t"), t.column("t"));
  EXPECT_EQ(back.column("v")[0], -1e-300);
  EXPECT_TRUE(std::isinf(back.column("v")[1]));
  EXPECT_TRUE(std::isnan(back.column("v")[2]));
  EXPECT_EQ(format_csv(back), text);
}

TEST(Csv, HeaderOnlyTable) {
  Table t;
  t.add("a", {});
  t.add("b", {});
  const Table back = parse_csv(format_csv(t));
  EXPECT_EQ(back.names, t.names);
  EXPECT_EQ(back.rows(), 0u);
}

TEST(Csv, RaggedColumnsRejected) {
  Table t;
  t.add("a", {1.0, 2.0});
  EXPECT_THROW(t.add("b", {1.0}), UsageError);
  EXPECT_THROW(parse_csv("a,b\n1,2\n3\n"), UsageError);
}

TEST(Svg, RendersPolylinesAndDecimates) {
  Table t;
  std::vector<double> x(10000), y(10000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<double>(i);
    y[i] = std::sin(0.01 * x[i]);
  }
  t.add("t", x);
  t.add("y", y);
  const std::string svg = render_svg(chart_from(t, "t", {"y"}, "title & <test>"));
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("&amp;"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_LT(svg.size(), 200000u);
}

TEST(Fit, RecoversExponent) {
  const std::vector<double> n{128, 256, 512, 1024, 2048};
  std::vector<double> v;
  for (double x : n) v.push_back(3.0 * std::sqrt(x));
  const FitResult f = powerlaw_fit(n, v);
  EXPECT_NEAR(f.alpha, 0.5, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-10);
  EXPECT_LT(f.residual, 1e-12);
  EXPECT_EQ(f.count, 5u);
}

TEST(Fit, ConstantHasZeroExponent) {
  const std::vector<double> n{1, 2, 4, 8};
  const std::vector<double> v{2, 2, 2, 2};
  EXPECT_NEAR(powerlaw_fit(n, v).alpha, 0.0, 1e-14);
}

TEST(Fit, WindowSelectsPoints) {
  const std::vector<double> n{1, 2, 4, 8, 16, 32};
  const std::vector<double> v{1, 2, 4, 64, 256, 1024};
  const FitResult f = powerlaw_fit(n, v, 4, 32);
  EXPECT_EQ(f.count, 4u);
  EXPECT_EQ(window_study(n, v).size(), 6u);
}

TEST(Fit, RejectsBadInput) {
  const std::vector<double> n{1, 2, 4, 8};
  EXPECT_THROW(powerlaw_fit(n, std::vector<double>{1, 0, 1, 1}), DomainError);
  EXPECT_THROW(powerlaw_fit(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), UsageError);
}

TEST(Config, ParsesKeysAndComments) {
  const RunConfig c = parse_config("# sweep\nexperiment = fig2-trace\nN = 64\nT = 20 # short\nemit = both\n");
  EXPECT_EQ(c.experiment, Experiment::fig2_trace);
  EXPECT_EQ(c.n, std::optional<std::size_t>(64));
  EXPECT_EQ(c.t_final, std::optional<double>(20.0));
  EXPECT_TRUE(c.emit.csv);
  EXPECT_TRUE(c.emit.svg);
  EXPECT_EQ(parse_config(format_config(c)).n, c.n);
}

TEST(Config, ErrorsNameTheField) {
  auto message = [](const std::string& text) {
    try {
      resolve(parse_config(text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("N = -3\n").find("N"), std::string::npos);
  EXPECT_NE(message("colour = red\n").find("colour"), std::string::npos);
  EXPECT_NE(message("experiment = fig1-scatter\n").find("seed"), std::string::npos);
  EXPECT_NE(message("experiment = fig2-scaling\nN = 64\n").find("N"), std::string::npos);
  EXPECT_NE(message("experiment = custom\n").find("model"), std::string::npos);
  EXPECT_FALSE(message("T = abc\n").empty());
}

TEST(Config, PresetsFillDefaults) {
  RunConfig c;
  c.experiment = Experiment::fig3_quench;
  const Resolved r = resolve(c);
  EXPECT_EQ(r.model, Model::quench);
  EXPECT_EQ(r.n, 2000u);
  EXPECT_EQ(r.coupling, 1.0);
}

TEST(Run, OutputIsByteIdentical) {
  RunConfig c = parse_config("experiment = custom\nmodel = two-level\nT = 20\nsteps = 50\nprotocol = boundary_flat\n");
  const auto first = scratch_dir("det_a"), second = scratch_dir("det_b");
  c.out = first;
  const RunReport a = run(c);
  c.out = second;
  const RunReport b = run(c);
  ASSERT_EQ(exit_status(a), kExitOk) << a.result.summary();
  ASSERT_EQ(a.written.size(), b.written.size());
  for (std::size_t i = 0; i < a.written.size(); ++i) {
    if (a.written[i].extension() != ".csv") continue;
    EXPECT_EQ(a.written[i].filename(), b.written[i].filename());
    EXPECT_EQ(read_file(a.written[i]), read_file(b.written[i])) << a.written[i];
  }
}

TEST(Run, TwoLevelTraceChecksPass) {
  RunConfig c = parse_config("experiment = fig1-traces\nT = 20\nsteps = 50\n");
  c.out = scratch_dir("traces");
  const RunReport r = run(c);
  EXPECT_TRUE(r.result.all_passed()) << r.result.summary();
  EXPECT_TRUE(std::filesystem::exists(c.out / "summary.txt"));
}

}  // namespace
}  // namespace qsl::expcli
