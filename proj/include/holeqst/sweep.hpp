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

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "holeqst/config.hpp"

namespace holeqst {

using Cell = std::variant<std::monostate, long long, double, bool, std::string>;

/// Column-typed result table. Rows are ordered by `sort_columns` (in order,
/// lexicographically) before they are written.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::size_t> sort_columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(const std::string& name) const;
  void sort_rows();
};

struct SweepResult {
  std::vector<Table> tables;  // the first one is the primary output
};

struct RunOptions {
  int workers = 1;
};

SweepResult run_theta_sweep(const SweepConfig& config, const RunOptions& options = {});
SweepResult run_axis_sweep(const SweepConfig& config, const RunOptions& options = {});
SweepResult run_size_sweep(const SweepConfig& config, const RunOptions& options = {});
SweepResult run_field_sweep(const SweepConfig& config, const RunOptions& options = {});
SweepResult run_time_trace(const SweepConfig& config, const RunOptions& options = {});
SweepResult run_noise_sweep(const SweepConfig& config, const RunOptions& options = {});
SweepResult run_analytics(const SweepConfig& config, const RunOptions& options = {});
/// Dispatches on config.kind.
SweepResult run_sweep(const SweepConfig& config, const RunOptions& options = {});

/// The theta grid actually evaluated: configured values plus, when enabled,
/// the commensurate angles of `L`, deduplicated (units of pi).
std::vector<double> resolved_theta_grid(const SweepConfig& config, int L);

/// Formats a real with 12 significant digits; "nan"/"inf" for non-finite.
std::string format_real(double value);

/// Writes every table. The primary table goes to `path`; table k > 0 goes to
/// `<stem>.<name><ext>`. Provenance columns config_hash, seed and
/// grid_points are appended to every row. A sidecar `<path>.meta.json` holds
/// the resolved config, seed and tool version. Returns the written paths.
std::vector<std::string> emit_results(const SweepResult& result, const SweepConfig& config, OutputFormat format,
                                      const std::string& path);
/// Single table to text, provenance included.
std::string render_table(const Table& table, const SweepConfig& config, OutputFormat format);

std::string tool_version();

}  // namespace holeqst
