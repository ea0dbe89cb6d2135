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

#include "holeqst/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "holeqst/analytics.hpp"
#include "holeqst/parallel.hpp"

namespace holeqst {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PointResult {
  double f_max = kNaN;
  double t_max = kNaN;
  bool degenerate = false;
  std::string error;
};

PointResult evaluate(const ChainSpec& spec, const TimeGrid& grid) {
  try {
    const auto s = fidelity_series(spec, grid);
    return {s.f_max, s.t_max, s.degenerate, {}};
  } catch (const std::exception& e) {
    return {kNaN, kNaN, false, e.what()};
  }
}

// Sort key order for tables whose leading columns are the swept parameters.
std::vector<std::size_t> first_columns(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

const std::vector<std::string> kChainColumns = {"L", "J0_mhz", "j0_mhz", "Bx_mhz", "By_mhz", "Bz_mhz", "init"};
const std::vector<std::string> kResultColumns = {"f_max", "t_max_us", "degenerate", "error"};

std::vector<std::string> concat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

void push_chain(std::vector<Cell>& row, const ChainSpec& spec) {
  row.insert(row.end(), {Cell{static_cast<long long>(spec.L)}, Cell{spec.J0}, Cell{spec.j0}, Cell{spec.B.x()},
                         Cell{spec.B.y()}, Cell{spec.B.z()}, Cell{to_string(spec.init)}});
}

void push_result(std::vector<Cell>& row, const PointResult& r) {
  row.insert(row.end(), {Cell{r.f_max}, Cell{r.t_max}, Cell{r.degenerate}, Cell{r.error}});
}

void push_axis(std::vector<Cell>& row, const Vector3& n) {
  row.insert(row.end(), {Cell{n.x()}, Cell{n.y()}, Cell{n.z()}});
}

ChainSpec oriented(const ChainSpec& base, double theta_over_pi, const SpinOrbitAxis& axis) {
  ChainSpec s = base;
  s.theta = theta_over_pi * std::numbers::pi;
  s.axis = axis;
  return s;
}

// Rows of (theta, axis, B) points sharing the theta-sweep column layout.
struct OrientedPoint {
  double theta_over_pi;
  Vector3 axis;
  Vector3 B;
};

Table oriented_table(const SweepConfig& config, const std::vector<OrientedPoint>& points, const RunOptions& options) {
  Table table;
  table.name = "results";
  table.columns = concat({{"theta_over_pi", "axis_x", "axis_y", "axis_z"}, kChainColumns, kResultColumns});
  const auto results = parallel_map(points.size(), options.workers, [&](std::size_t i) {
    ChainSpec spec = oriented(config.base, points[i].theta_over_pi, SpinOrbitAxis::from_unit(points[i].axis));
    spec.B = points[i].B;
    return evaluate(spec, config.time);
  });
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<Cell> row{points[i].theta_over_pi};
    push_axis(row, points[i].axis);
    ChainSpec spec = config.base;
    spec.B = points[i].B;
    push_chain(row, spec);
    push_result(row, results[i]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

double as_real(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? 1.0 : 0.0;
  return kNaN;
}

// Total order on cells: empty < numbers (NaN last) < strings.
int compare_cells(const Cell& a, const Cell& b) {
  const bool sa = std::holds_alternative<std::string>(a), sb = std::holds_alternative<std::string>(b);
  const bool ea = std::holds_alternative<std::monostate>(a), eb = std::holds_alternative<std::monostate>(b);
  if (ea || eb) return ea == eb ? 0 : (ea ? -1 : 1);
  if (sa || sb) {
    if (sa && sb) return std::get<std::string>(a).compare(std::get<std::string>(b));
    return sa ? 1 : -1;
  }
  const double x = as_real(a), y = as_real(b);
  if (std::isnan(x) || std::isnan(y)) return std::isnan(x) == std::isnan(y) ? 0 : (std::isnan(x) ? 1 : -1);
  return x < y ? -1 : (x > y ? 1 : 0);
}

std::string join_errors(const std::vector<std::string>& errors) {
  std::string out;
  for (const auto& e : errors) {
    if (e.empty()) continue;
    if (!out.empty()) out += "; ";
    out += e;
  }
  return out;
}

bool is_z_axis(const SpinOrbitAxis& axis) { return (axis.vector() - Vector3::UnitZ()).norm() < 1e-12; }

}  // namespace

std::size_t Table::column(const std::string& key) const {
  const auto it = std::find(columns.begin(), columns.end(), key);
  if (it == columns.end()) throw std::out_of_range("table '" + name + "' has no column '" + key + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

void Table::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(), [this](const auto& a, const auto& b) {
    for (std::size_t c : sort_columns) {
      if (const int r = compare_cells(a[c], b[c]); r != 0) return r < 0;
    }
    return false;
  });
}

std::vector<double> resolved_theta_grid(const SweepConfig& config, int L) {
  std::vector<double> out = config.grid.theta_over_pi;
  if (config.grid.append_commensurate && L >= 2) {
    for (int n = 0; n <= L - 1; ++n) out.push_back(2.0 * n / (L - 1));
  }
  std::sort(out.begin(), out.end());
  std::vector<double> unique;
  for (double t : out) {
    if (unique.empty() || t - unique.back() > 1e-12) unique.push_back(t);
  }
  return unique;
}

SweepResult run_theta_sweep(const SweepConfig& config, const RunOptions& options) {
  std::vector<OrientedPoint> points;
  for (double t : resolved_theta_grid(config, config.base.L)) {
    for (const auto& a : config.grid.axes) points.push_back({t, a.axis.vector(), config.base.B});
  }
  Table table = oriented_table(config, points, options);
  table.sort_columns = first_columns(4);
  table.sort_rows();
  return {{std::move(table)}};
}

SweepResult run_axis_sweep(const SweepConfig& config, const RunOptions& options) {
  struct Point {
    double theta_over_pi, nx, nz, ny;
    bool skipped;
  };
  std::vector<Point> points;
  for (double t : config.grid.theta_over_pi) {
    for (double nx : config.grid.n_x) {
      for (double nz : config.grid.n_z) {
        const double rest = 1.0 - nx * nx - nz * nz;
        const bool skipped = rest < -1e-12;
        points.push_back({t, nx, nz, skipped ? kNaN : std::sqrt(std::max(rest, 0.0)), skipped});
      }
    }
  }
  const auto results = parallel_map(points.size(), options.workers, [&](std::size_t i) {
    const auto& p = points[i];
    if (p.skipped) return PointResult{};
    try {
      return evaluate(oriented(config.base, p.theta_over_pi, SpinOrbitAxis::normalized({p.nx, p.ny, p.nz})),
                      config.time);
    } catch (const std::exception& e) {
      return PointResult{kNaN, kNaN, false, e.what()};
    }
  });
  Table table;
  table.name = "results";
  table.columns = concat({{"theta_over_pi", "n_x", "n_z", "n_y"}, kChainColumns, {"skipped"}, kResultColumns});
  table.sort_columns = first_columns(3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    std::vector<Cell> row{p.theta_over_pi, p.nx, p.nz, p.ny};
    push_chain(row, config.base);
    row.emplace_back(p.skipped);
    push_result(row, results[i]);
    table.rows.push_back(std::move(row));
  }
  table.sort_rows();
  return {{std::move(table)}};
}

SweepResult run_size_sweep(const SweepConfig& config, const RunOptions& options) {
  struct Point {
    const OrientationEntry* branch;
    int L;
  };
  std::vector<Point> points;
  for (const auto& b : config.grid.branches) {
    for (int L : config.grid.sizes) points.push_back({&b, L});
  }
  const auto results = parallel_map(points.size(), options.workers, [&](std::size_t i) {
    ChainSpec spec = oriented(config.base, points[i].branch->theta_over_pi, points[i].branch->axis.axis);
    spec.L = points[i].L;
    if (points[i].branch->B) spec.B = *points[i].branch->B;
    return evaluate(spec, config.time);
  });
  Table table;
  table.name = "results";
  table.columns = concat({{"branch", "theta_over_pi", "axis_x", "axis_y", "axis_z"}, kChainColumns, kResultColumns});
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& b = *points[i].branch;
    std::vector<Cell> row{b.label, b.theta_over_pi};
    push_axis(row, b.axis.axis.vector());
    ChainSpec spec = config.base;
    spec.L = points[i].L;
    if (b.B) spec.B = *b.B;
    push_chain(row, spec);
    push_result(row, results[i]);
    table.rows.push_back(std::move(row));
  }
  table.sort_columns = {0, table.column("L")};
  table.sort_rows();
  return {{std::move(table)}};
}

SweepResult run_field_sweep(const SweepConfig& config, const RunOptions& options) {
  std::vector<OrientedPoint> points;
  const auto thetas = resolved_theta_grid(config, config.base.L);
  for (const auto& B : config.grid.fields) {
    for (const auto& a : config.grid.axes) {
      for (double t : thetas) points.push_back({t, a.axis.vector(), B});
    }
  }
  Table table = oriented_table(config, points, options);
  const std::size_t bx = table.column("Bx_mhz"), f = table.column("f_max"), tmax = table.column("t_max_us");
  table.sort_columns = {bx, bx + 1, bx + 2, 1, 2, 3, 0};
  table.sort_rows();

  Table peaks;
  peaks.name = "peaks";
  peaks.columns = {"Bx_mhz", "By_mhz", "Bz_mhz", "axis_x", "axis_y", "axis_z", "theta_over_pi",
                   "f_max", "t_max_us", "global_max"};
  peaks.sort_columns = first_columns(7);
  // After sorting, each (B, axis) block is a contiguous run ordered by theta.
  for (std::size_t start = 0; start < table.rows.size();) {
    std::size_t end = start;
    auto same_block = [&](std::size_t r) {
      for (std::size_t c : {bx, bx + 1, bx + 2, std::size_t{1}, std::size_t{2}, std::size_t{3}}) {
        if (compare_cells(table.rows[r][c], table.rows[start][c]) != 0) return false;
      }
      return true;
    };
    while (end < table.rows.size() && same_block(end)) ++end;
    std::size_t best = start;
    for (std::size_t r = start; r < end; ++r) {
      if (as_real(table.rows[r][f]) > as_real(table.rows[best][f])) best = r;
    }
    for (std::size_t r = start; r < end; ++r) {
      const double v = as_real(table.rows[r][f]);
      const bool rises = r == start || v > as_real(table.rows[r - 1][f]);
      const bool holds = r + 1 == end || v >= as_real(table.rows[r + 1][f]);
      if (!(r == best || (rises && holds && v >= config.grid.peak_threshold))) continue;
      const auto& src = table.rows[r];
      peaks.rows.push_back({src[bx], src[bx + 1], src[bx + 2], src[1], src[2], src[3], src[0], src[f], src[tmax],
                            Cell{r == best}});
    }
    start = end;
  }
  peaks.sort_rows();
  return {{std::move(table), std::move(peaks)}};
}

SweepResult run_time_trace(const SweepConfig& config, const RunOptions& options) {
  const auto times = config.time.times();
  const auto& traces = config.grid.traces;
  struct TraceResult {
    std::vector<double> values;
    PointResult peak;
    double numerical_frequency = kNaN;
    double vv_frequency = kNaN;
    std::vector<std::string> errors;
  };
  auto spec_of = [&](const OrientationEntry& e) {
    ChainSpec s = oriented(config.base, e.theta_over_pi, e.axis.axis);
    if (e.B) s.B = *e.B;
    return s;
  };
  const auto results = parallel_map(traces.size(), options.workers, [&](std::size_t i) {
    TraceResult r;
    const ChainSpec spec = spec_of(traces[i]);
    try {
      const TransferFidelity tf(spec, config.time.phase);
      r.values = tf.sample(times);
      const auto s = tf.series(config.time);
      r.peak = {s.f_max, s.t_max, s.degenerate, {}};
      r.numerical_frequency = lobe_frequency(times, r.values);
    } catch (const std::exception& e) {
      r.values.assign(times.size(), kNaN);
      r.errors.emplace_back(e.what());
    }
    if (spec.L == 4 && is_z_axis(spec.axis)) {
      try {
        const auto vv = van_vleck_effective(bond_exchange(spec, 1), bond_exchange(spec, 0));
        r.vv_frequency = vv.predicted_frequency * phase_factor(config.time.phase) / (2.0 * std::numbers::pi);
      } catch (const std::exception& e) {
        r.errors.emplace_back(e.what());
      }
    }
    return r;
  });

  Table wide;
  wide.name = "trace";
  wide.columns = {"t_us"};
  for (const auto& t : traces) wide.columns.push_back("F_" + t.label);
  wide.sort_columns = {0};
  for (std::size_t j = 0; j < times.size(); ++j) {
    std::vector<Cell> row{times[j]};
    for (const auto& r : results) row.emplace_back(r.values[j]);
    wide.rows.push_back(std::move(row));
  }

  Table summary;
  summary.name = "summary";
  summary.columns = {"label", "theta_over_pi", "axis_x", "axis_y", "axis_z", "Bx_mhz", "By_mhz", "Bz_mhz",
                     "f_max", "t_max_us", "degenerate", "numerical_frequency_mhz", "vv_frequency_mhz", "error"};
  summary.sort_columns = {0};
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const ChainSpec spec = spec_of(traces[i]);
    const auto& r = results[i];
    std::vector<Cell> row{traces[i].label, traces[i].theta_over_pi};
    push_axis(row, spec.axis.vector());
    row.insert(row.end(), {Cell{spec.B.x()}, Cell{spec.B.y()}, Cell{spec.B.z()}, Cell{r.peak.f_max},
                           Cell{r.peak.t_max}, Cell{r.peak.degenerate}, Cell{r.numerical_frequency},
                           Cell{r.vv_frequency}, Cell{join_errors(r.errors)}});
    summary.rows.push_back(std::move(row));
  }
  summary.sort_rows();
  return {{std::move(wide), std::move(summary)}};
}

SweepResult run_noise_sweep(const SweepConfig& config, const RunOptions& options) {
  const auto& ng = config.grid.noise;
  const PointResult noiseless = evaluate(config.base, config.time);

  Table summary;
  summary.name = "summary";
  summary.columns = {"kind",           "split_target",  "strength",      "distribution", "realizations",
                     "noiseless_f_max", "mean_peak_f",   "mean_peak_t_us", "f_max_mean",  "f_max_std",
                     "f_max_stderr",    "degenerate",    "error"};
  summary.sort_columns = first_columns(3);
  Table curves;
  curves.name = "curves";
  curves.columns = {"kind", "split_target", "strength", "t_us", "mean_F"};
  curves.sort_columns = first_columns(4);

  for (NoiseKind kind : ng.kinds) {
    const std::vector<SplitTarget> targets =
        kind == NoiseKind::Split ? ng.split_targets : std::vector<SplitTarget>{SplitTarget::Both};
    for (SplitTarget target : targets) {
      const std::string target_label = kind == NoiseKind::Split ? to_string(target) : "-";
      for (double strength : ng.strengths) {
        NoiseModel model{kind, strength, ng.distribution, config.seed, ng.realizations, target};
        std::vector<Cell> row{to_string(kind), target_label, strength, to_string(ng.distribution),
                              static_cast<long long>(ng.realizations), noiseless.f_max};
        try {
          const auto avg = disorder_averaged_fidelity(config.base, model, config.time, options.workers);
          row.insert(row.end(), {Cell{avg.mean_curve.f_max}, Cell{avg.mean_curve.t_max}, Cell{avg.f_max_mean},
                                 Cell{avg.f_max_std}, Cell{avg.f_max_stderr}, Cell{avg.mean_curve.degenerate},
                                 Cell{std::string()}});
          if (ng.emit_curves) {
            for (std::size_t j = 0; j < avg.mean_curve.times.size(); ++j) {
              curves.rows.push_back(
                  {to_string(kind), target_label, strength, avg.mean_curve.times[j], avg.mean_curve.values[j]});
            }
          }
        } catch (const std::exception& e) {
          row.insert(row.end(),
                     {Cell{kNaN}, Cell{kNaN}, Cell{kNaN}, Cell{kNaN}, Cell{kNaN}, Cell{false}, Cell{std::string(e.what())}});
        }
        summary.rows.push_back(std::move(row));
      }
    }
  }
  summary.sort_rows();
  curves.sort_rows();
  SweepResult out{{std::move(summary)}};
  if (ng.emit_curves) out.tables.push_back(std::move(curves));
  return out;
}

SweepResult run_analytics(const SweepConfig& config, const RunOptions&) {
  const ChainSpec& spec = config.base;
  std::vector<std::string> errors;
  auto guard = [&](auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      errors.emplace_back(e.what());
    }
  };
  double delta = kNaN, splitting = kNaN, transfer = kNaN, omega_end = kNaN, omega_channel = kNaN;
  bool isolated = false;
  Complex T{kNaN, kNaN};
  double g11 = kNaN, g22 = kNaN, vv_freq = kNaN;
  guard([&] {
    const auto d = detuning_delta(spec, config.time.phase);
    delta = d.delta;
    splitting = d.splitting;
    transfer = d.transfer_time;
    isolated = d.isolated;
  });
  guard([&] { omega_end = two_spin_solution(bond_exchange(spec, 0)).omega; });
  guard([&] {
    if (spec.L < 4) throw std::invalid_argument("channel bond needs L >= 4");
    omega_channel = two_spin_solution(bond_exchange(spec, 1)).omega;
  });
  guard([&] {
    if (spec.L != 4) throw std::invalid_argument("effective two-level model needs L = 4");
    const auto vv = van_vleck_effective(bond_exchange(spec, 1), bond_exchange(spec, 0));
    T = vv.T;
    g11 = vv.G_diag;
    g22 = vv.G_diag_other;
    vv_freq = vv.predicted_frequency * phase_factor(config.time.phase) / (2.0 * std::numbers::pi);
  });

  Table table;
  table.name = "analytics";
  table.columns = {"L",         "theta_over_pi", "axis_x",           "axis_y",         "axis_z",
                   "J0_mhz",    "j0_mhz",        "Bx_mhz",           "By_mhz",         "Bz_mhz",
                   "delta_mhz", "splitting_mhz", "transfer_time_us", "isolated",       "omega_end_mhz",
                   "omega_channel_mhz", "vv_T_re_mhz", "vv_T_im_mhz", "vv_G11_mhz",     "vv_G22_mhz",
                   "vv_frequency_mhz", "error"};
  std::vector<Cell> row{static_cast<long long>(spec.L), spec.theta / std::numbers::pi};
  push_axis(row, spec.axis.vector());
  row.insert(row.end(), {Cell{spec.J0}, Cell{spec.j0}, Cell{spec.B.x()}, Cell{spec.B.y()}, Cell{spec.B.z()},
                         Cell{delta}, Cell{splitting}, Cell{transfer}, Cell{isolated}, Cell{omega_end},
                         Cell{omega_channel}, Cell{T.real()}, Cell{T.imag()}, Cell{g11}, Cell{g22}, Cell{vv_freq},
                         Cell{join_errors(errors)}});
  table.rows.push_back(std::move(row));
  return {{std::move(table)}};
}

SweepResult run_sweep(const SweepConfig& config, const RunOptions& options) {
  config.validate();
  switch (config.kind) {
    case SweepKind::Theta: return run_theta_sweep(config, options);
    case SweepKind::AxisGrid: return run_axis_sweep(config, options);
    case SweepKind::Size: return run_size_sweep(config, options);
    case SweepKind::Field: return run_field_sweep(config, options);
    case SweepKind::TimeTrace: return run_time_trace(config, options);
    case SweepKind::Noise: return run_noise_sweep(config, options);
    case SweepKind::Analytics: return run_analytics(config, options);
  }
  throw std::invalid_argument("unknown sweep kind");
}

}  // namespace holeqst
