// Copyright 2026 The holeqst Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "holeqst/sweep.hpp"
#include "json.hpp"

namespace holeqst {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "holeqst_sweep_tests";
  fs::create_directories(dir);
  return dir / name;
}

SweepConfig small_theta() {
  return parse_config(R"({
    "sweep": "theta",
    "time": {"points": 401},
    "grid": {"theta_over_pi": {"start": 0, "stop": 2, "count": 9},
             "axes": ["x", [0, 1, 0], [0.5, 0.5, 0.707]]},
    "seed": 42
  })");
}

double cell_real(const Table& t, std::size_t row, const std::string& col) {
  return std::get<double>(t.rows[row][t.column(col)]);
}

TEST(Config, DefaultsAndUnits) {
  const auto c = parse_config(R"({"chain": {"theta_over_pi": 0.3, "axis": [0.5, 0.5, 0.707]}})");
  EXPECT_EQ(c.kind, SweepKind::Theta);
  EXPECT_NEAR(c.base.theta, 0.3 * std::numbers::pi, 1e-15);
  EXPECT_NEAR(c.base.axis.vector().norm(), 1.0, 1e-15);
  EXPECT_EQ(c.grid.theta_over_pi.size(), 201U);
  EXPECT_EQ(c.grid.axes.size(), 5U);
  EXPECT_EQ(c.time.points, 4001);
  const auto resolved = nlohmann::json::parse(c.resolved_json());
  EXPECT_NEAR(resolved["chain"]["axis"]["input_norm"].get<double>(), std::sqrt(0.5 * 0.5 * 2 + 0.707 * 0.707), 1e-12);
  EXPECT_EQ(resolved["chain"]["axis"]["input"][2].get<double>(), 0.707);
}

TEST(Config, RangesFieldsAndOverrides) {
  const auto c = parse_config(R"({
    "sweep": "field",
    "time": {"two_pi": false},
    "grid": {"theta_over_pi": {"start": 0, "stop": 1, "step": 0.25},
             "fields_mhz": [0, 50, [1, 2, 3]], "field_direction": [1, 0, 0]}
  })");
  EXPECT_EQ(c.grid.theta_over_pi, (std::vector<double>{0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(c.grid.fields[1], Vector3(50, 0, 0));
  EXPECT_EQ(c.grid.fields[2], Vector3(1, 2, 3));
  EXPECT_EQ(c.time.phase, PhaseConvention::Unity);
  EXPECT_EQ(parse_config("{}", SweepKind::Size).kind, SweepKind::Size);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config("{"), std::invalid_argument);
  EXPECT_THROW(parse_config(R"({"chian": {}})"), std::invalid_argument);
  EXPECT_THROW(parse_config(R"({"sweep": "spiral"})"), std::invalid_argument);
  EXPECT_THROW(parse_config(R"({"grid": {"axes": [[0, 0, 0]]}})"), std::invalid_argument);
  EXPECT_THROW(parse_config(R"({"time": {"window_us": -1}})"), std::invalid_argument);
  EXPECT_THROW(parse_config(R"({"sweep": "noise", "grid": {"noise": {"strengths": [-0.1]}}})"),
               std::invalid_argument);
  EXPECT_THROW(parse_config(R"({"grid": {"theta_over_pi": []}})"), std::invalid_argument);
}

TEST(Config, HashIgnoresOutputButNotPhysics) {
  auto a = small_theta();
  auto b = a;
  b.output_path = "elsewhere.csv";
  b.format = OutputFormat::JsonLines;
  EXPECT_EQ(a.hash(), b.hash());
  b.base.J0 = 161.0;
  EXPECT_NE(a.hash(), b.hash());
  b = a;
  b.seed = 43;
  EXPECT_NE(a.hash(), b.hash());
}

TEST(ThetaGrid, AppendsCommensurateAngles) {
  auto c = small_theta();
  const auto grid = resolved_theta_grid(c, 4);
  // 9 uniform points plus 2/3 and 4/3; 0 and 2 are already present.
  EXPECT_EQ(grid.size(), 11U);
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
  c.grid.append_commensurate = false;
  EXPECT_EQ(resolved_theta_grid(c, 4).size(), 9U);
}

TEST(ThetaSweep, SchemaOrderingAndConsistency) {
  const auto c = small_theta();
  const auto result = run_theta_sweep(c);
  ASSERT_EQ(result.tables.size(), 1U);
  const Table& t = result.tables[0];
  EXPECT_EQ(t.columns, (std::vector<std::string>{"theta_over_pi", "axis_x", "axis_y", "axis_z", "L", "J0_mhz",
                                                 "j0_mhz", "Bx_mhz", "By_mhz", "Bz_mhz", "init", "f_max",
                                                 "t_max_us", "degenerate", "error"}));
  EXPECT_EQ(t.rows.size(), 11U * 3U);
  for (std::size_t r = 1; r < t.rows.size(); ++r) {
    EXPECT_LE(cell_real(t, r - 1, "theta_over_pi"), cell_real(t, r, "theta_over_pi"));
  }
  // theta = 0 rows are the isotropic chain regardless of axis.
  for (std::size_t r = 1; r < 3; ++r) EXPECT_EQ(cell_real(t, r, "f_max"), cell_real(t, 0, "f_max"));

  // Any cell equals a standalone run.
  const std::size_t r = 13;
  ChainSpec spec = c.base;
  spec.theta = cell_real(t, r, "theta_over_pi") * std::numbers::pi;
  spec.axis = SpinOrbitAxis::from_unit(
      {cell_real(t, r, "axis_x"), cell_real(t, r, "axis_y"), cell_real(t, r, "axis_z")});
  const auto direct = fidelity_series(spec, c.time);
  EXPECT_NEAR(cell_real(t, r, "f_max"), direct.f_max, 1e-12);
  EXPECT_NEAR(cell_real(t, r, "t_max_us"), direct.t_max, 1e-12);
}

TEST(AxisSweep, SkipsOutsideUnitDiskAndMatchesDirectRun) {
  const auto c = parse_config(R"({
    "sweep": "axis-grid", "time": {"points": 401},
    "grid": {"theta_over_pi": [0.4], "n_x": [-1, 0, 0.8], "n_z": [0, 1]}
  })");
  const Table t = run_axis_sweep(c).tables[0];
  ASSERT_EQ(t.rows.size(), 6U);
  std::size_t skipped = 0;
  for (const auto& row : t.rows) {
    const bool s = std::get<bool>(row[t.column("skipped")]);
    skipped += s;
    const double nx = std::get<double>(row[t.column("n_x")]), nz = std::get<double>(row[t.column("n_z")]);
    EXPECT_EQ(s, nx * nx + nz * nz > 1.0);
    if (s) {
      EXPECT_TRUE(std::isnan(std::get<double>(row[t.column("f_max")])));
    }
    if (nx == 0.0 && nz == 1.0) {
      ChainSpec spec = c.base;
      spec.theta = 0.4 * std::numbers::pi;
      spec.axis = SpinOrbitAxis::z();
      EXPECT_NEAR(std::get<double>(row[t.column("f_max")]), fidelity_series(spec, c.time).f_max, 1e-12);
    }
  }
  EXPECT_EQ(skipped, 2U);
}

TEST(SizeSweep, OversizedRowsCarryErrors) {
  const auto c = parse_config(R"({
    "sweep": "size", "time": {"points": 201},
    "grid": {"sizes": [4, 15], "branches": [{"label": "iso", "theta_over_pi": 0}]}
  })");
  const Table t = run_size_sweep(c).tables[0];
  ASSERT_EQ(t.rows.size(), 2U);
  EXPECT_EQ(std::get<std::string>(t.rows[0][t.column("error")]), "");
  EXPECT_NE(std::get<std::string>(t.rows[1][t.column("error")]).find("exceeds"), std::string::npos);
  EXPECT_TRUE(std::isnan(std::get<double>(t.rows[1][t.column("f_max")])));
}

TEST(FieldSweep, ZeroFieldRowsEqualThetaSweepAndPeaksAreReported) {
  auto c = small_theta();
  c.kind = SweepKind::Field;
  c.grid.fields = {Vector3::Zero(), Vector3(0, 0, 50)};
  const auto field = run_field_sweep(c);
  ASSERT_EQ(field.tables.size(), 2U);
  const Table& rows = field.tables[0];
  const Table theta = run_theta_sweep(c).tables[0];
  std::size_t matched = 0;
  for (const auto& fr : rows.rows) {
    if (std::get<double>(fr[rows.column("Bz_mhz")]) != 0.0) continue;
    for (const auto& tr : theta.rows) {
      bool same = true;
      for (const char* k : {"theta_over_pi", "axis_x", "axis_y", "axis_z"}) {
        same = same && std::get<double>(fr[rows.column(k)]) == std::get<double>(tr[theta.column(k)]);
      }
      if (!same) continue;
      EXPECT_EQ(std::get<double>(fr[rows.column("f_max")]), std::get<double>(tr[theta.column("f_max")]));
      ++matched;
    }
  }
  EXPECT_EQ(matched, theta.rows.size());
  const Table& peaks = field.tables[1];
  std::size_t globals = 0;
  for (const auto& p : peaks.rows) globals += std::get<bool>(p[peaks.column("global_max")]);
  EXPECT_EQ(globals, 2U * 3U);
}

TEST(TimeTrace, SharedGridStartsAtZero) {
  const auto c = parse_config(R"({"sweep": "time-trace", "time": {"points": 301}})");
  const auto result = run_time_trace(c);
  const Table& wide = result.tables[0];
  EXPECT_EQ(wide.columns, (std::vector<std::string>{"t_us", "F_isotropic", "F_tilted", "F_aligned"}));
  EXPECT_EQ(wide.rows.size(), 301U);
  for (std::size_t k = 1; k < wide.columns.size(); ++k) EXPECT_NEAR(std::get<double>(wide.rows[0][k]), 0.0, 1e-15);
  const Table& summary = result.tables[1];
  for (const auto& row : summary.rows) {
    const bool aligned = std::get<std::string>(row[0]) != "tilted";
    EXPECT_EQ(std::isfinite(std::get<double>(row[summary.column("vv_frequency_mhz")])), aligned);
  }
}

TEST(NoiseSweep, ZeroStrengthReproducesNoiseless) {
  const auto c = parse_config(R"({
    "sweep": "noise", "time": {"points": 201}, "seed": 3,
    "grid": {"noise": {"kinds": ["correlated"], "strengths": [0], "realizations": 2}}
  })");
  const auto result = run_noise_sweep(c);
  const Table& s = result.tables[0];
  ASSERT_EQ(s.rows.size(), 1U);
  const auto clean = fidelity_series(c.base, c.time);
  EXPECT_EQ(std::get<double>(s.rows[0][s.column("f_max_mean")]), clean.f_max);
  const Table& curves = result.tables[1];
  ASSERT_EQ(curves.rows.size(), clean.values.size());
  for (std::size_t j = 0; j < clean.values.size(); ++j) {
    EXPECT_EQ(std::get<double>(curves.rows[j][curves.column("mean_F")]), clean.values[j]);
  }
}

TEST(Analytics, SingleRowWithErrorsCollected) {
  auto c = default_config(SweepKind::Analytics);
  const Table t = run_analytics(c).tables[0];
  ASSERT_EQ(t.rows.size(), 1U);
  EXPECT_NEAR(std::get<double>(t.rows[0][t.column("vv_frequency_mhz")]), 1.25, 1e-12);
  c.base.L = 5;
  const Table five = run_analytics(c).tables[0];
  EXPECT_FALSE(std::get<std::string>(five.rows[0][five.column("error")]).empty());
}

TEST(Emit, EmptyTableIsHeaderOnly) {
  Table t;
  t.name = "results";
  t.columns = {"a", "b"};
  const auto c = small_theta();
  EXPECT_EQ(render_table(t, c, OutputFormat::Csv), "a,b,config_hash,seed,grid_points\n");
  EXPECT_EQ(render_table(t, c, OutputFormat::JsonLines), "");
}

TEST(Emit, RealFormatting) {
  EXPECT_EQ(format_real(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_real(-0.0), "0");
  EXPECT_EQ(format_real(1e-20), "1e-20");
  EXPECT_EQ(format_real(std::nan("")), "nan");
}

TEST(Emit, ByteIdenticalAcrossRunsAndWorkers) {
  auto c = small_theta();
  const auto p1 = scratch("a/theta.csv"), p2 = scratch("b/theta.csv");
  emit_results(run_theta_sweep(c, {1}), c, OutputFormat::Csv, p1.string());
  emit_results(run_theta_sweep(c, {3}), c, OutputFormat::Csv, p2.string());
  EXPECT_EQ(slurp(p1), slurp(p2));
  EXPECT_EQ(slurp(p1.string() + ".meta.json"), slurp(p2.string() + ".meta.json"));
}

TEST(Emit, CsvRoundTripAndProvenance) {
  auto c = small_theta();
  const auto path = scratch("rt/theta.csv");
  emit_results(run_theta_sweep(c), c, OutputFormat::Csv, path.string());
  const auto rows = parse_csv(slurp(path));
  const auto& header = rows[0];
  ASSERT_EQ(header.back(), "grid_points");
  const auto col = [&](const std::string& k) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), k) - header.begin());
  };
  const auto& row = rows[17];
  EXPECT_EQ(row[col("config_hash")], c.hash());
  EXPECT_EQ(row[col("seed")], "42");
  EXPECT_EQ(row[col("grid_points")], "401");
  ChainSpec spec = c.base;
  spec.theta = std::stod(row[col("theta_over_pi")]) * std::numbers::pi;
  spec.axis = SpinOrbitAxis::normalized(
      {std::stod(row[col("axis_x")]), std::stod(row[col("axis_y")]), std::stod(row[col("axis_z")])});
  EXPECT_NEAR(fidelity_series(spec, c.time).f_max, std::stod(row[col("f_max")]), 1e-9);

  const auto meta = nlohmann::json::parse(slurp(path.string() + ".meta.json"));
  EXPECT_EQ(meta["seed"].get<std::uint64_t>(), 42U);
  EXPECT_EQ(meta["config_hash"].get<std::string>(), c.hash());
  EXPECT_EQ(meta["version"].get<std::string>(), tool_version());
  EXPECT_EQ(meta["config"]["sweep"].get<std::string>(), "theta");
}

TEST(Emit, JsonLinesMirrorCsvColumns) {
  auto c = small_theta();
  const auto result = run_theta_sweep(c);
  std::istringstream lines(render_table(result.tables[0], c, OutputFormat::JsonLines));
  std::string line;
  std::getline(lines, line);
  const auto first = nlohmann::ordered_json::parse(line);
  std::vector<std::string> keys;
  for (const auto& item : first.items()) keys.push_back(item.key());
  auto expected = result.tables[0].columns;
  expected.insert(expected.end(), {"config_hash", "seed", "grid_points"});
  EXPECT_EQ(keys, expected);
  EXPECT_TRUE(first["degenerate"].is_boolean());
}

TEST(Emit, SecondaryTablesGetDerivedNames) {
  auto c = parse_config(R"({"sweep": "time-trace", "time": {"points": 101}})");
  const auto written = emit_results(run_time_trace(c), c, OutputFormat::Csv, scratch("tr/trace.csv").string());
  ASSERT_EQ(written.size(), 3U);
  EXPECT_EQ(fs::path(written[1]).filename(), "trace.summary.csv");
  EXPECT_EQ(fs::path(written[2]).filename(), "trace.csv.meta.json");
}

TEST(TableSort, LexicographicWithNaNLast) {
  Table t;
  t.columns = {"k", "v"};
  t.sort_columns = {0, 1};
  t.rows = {{std::string("b"), 1.0}, {std::string("a"), std::nan("")}, {std::string("a"), 2.0}};
  t.sort_rows();
  EXPECT_EQ(std::get<std::string>(t.rows[0][0]), "a");
  EXPECT_EQ(std::get<double>(t.rows[0][1]), 2.0);
  EXPECT_TRUE(std::isnan(std::get<double>(t.rows[1][1])));
  EXPECT_THROW(t.column("missing"), std::out_of_range);
}

}  // namespace
}  // namespace holeqst
