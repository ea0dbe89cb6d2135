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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holeqst/dynamics.hpp"
#include "holeqst/model.hpp"
#include "holeqst/noise.hpp"

namespace holeqst {

enum class SweepKind { Theta, AxisGrid, Size, Field, Noise, TimeTrace, Analytics };
enum class OutputFormat { Csv, JsonLines };

std::string to_string(SweepKind kind);
SweepKind sweep_kind_from_string(const std::string& name);
std::string to_string(OutputFormat format);
OutputFormat output_format_from_string(const std::string& name);

/// An axis as typed in the config, plus what it normalized to.
struct AxisEntry {
  Vector3 raw = Vector3::UnitZ();
  SpinOrbitAxis axis;
  double raw_norm = 1.0;

  static AxisEntry from_raw(const Vector3& raw);
};

/// A (theta, axis) pair; used for the size-sweep branches and the traces.
struct OrientationEntry {
  std::string label;
  double theta_over_pi = 0.0;
  AxisEntry axis;
  std::optional<Vector3> B;  // overrides the base field when set
};

struct NoiseGrid {
  std::vector<NoiseKind> kinds{NoiseKind::Correlated, NoiseKind::Split, NoiseKind::Uncorrelated};
  std::vector<SplitTarget> split_targets{SplitTarget::Both};
  std::vector<double> strengths{1e-3, 1e-2, 1e-1};
  NoiseDistribution distribution = NoiseDistribution::Uniform;
  int realizations = 200;
  bool emit_curves = true;
};

struct SweepGrid {
  std::vector<double> theta_over_pi;
  bool append_commensurate = true;
  std::vector<AxisEntry> axes;
  std::vector<double> n_x;
  std::vector<double> n_z;
  std::vector<int> sizes;
  std::vector<OrientationEntry> branches;
  std::vector<Vector3> fields;
  double peak_threshold = 0.9;
  std::vector<OrientationEntry> traces;
  NoiseGrid noise;
};

struct SweepConfig {
  SweepKind kind = SweepKind::Theta;
  ChainSpec base;
  AxisEntry base_axis;
  SweepGrid grid;
  TimeGrid time;
  std::uint64_t seed = 0;
  std::string output_path;
  OutputFormat format = OutputFormat::Csv;

  /// Throws std::invalid_argument when the grid is empty or malformed.
  void validate() const;
  /// Canonical JSON text of the fully resolved config (defaults filled in).
  std::string resolved_json() const;
  /// FNV-1a 64 of resolved_json(), as 16 hex digits.
  std::string hash() const;
};

/// Parses JSON config text. Missing grid entries get the defaults of `kind`;
/// the sweep kind in the text wins unless `kind_override` is given.
SweepConfig parse_config(const std::string& text, std::optional<SweepKind> kind_override = std::nullopt);
SweepConfig load_config(const std::string& path, std::optional<SweepKind> kind_override = std::nullopt);
/// Config with every field at its default for `kind`.
SweepConfig default_config(SweepKind kind);

}  // namespace holeqst
