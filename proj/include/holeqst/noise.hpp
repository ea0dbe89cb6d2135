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
#include <string>
#include <vector>

#include "holeqst/dynamics.hpp"
#include "holeqst/model.hpp"

namespace holeqst {

enum class NoiseKind { Correlated, Split, Uncorrelated };
enum class NoiseDistribution { Uniform, Gaussian };
/// Which couplings a split-kind model perturbs.
enum class SplitTarget { Both, Intra, End };

std::string to_string(NoiseKind kind);
std::string to_string(NoiseDistribution distribution);
std::string to_string(SplitTarget target);
NoiseKind noise_kind_from_string(const std::string& name);
NoiseDistribution noise_distribution_from_string(const std::string& name);
SplitTarget split_target_from_string(const std::string& name);

/// Quasi-static exchange noise: each realization rescales bond couplings by
/// (1 + eta_i) inside the channel and (1 + mu_i) on the two end bonds.
struct NoiseModel {
  NoiseKind kind = NoiseKind::Correlated;
  double strength = 0.0;  // half-width (uniform) or sigma (gaussian), dJ/J
  NoiseDistribution distribution = NoiseDistribution::Uniform;
  std::uint64_t seed = 0;
  int realizations = 200;
  SplitTarget split_target = SplitTarget::Both;

  void validate() const;
};

struct NoiseRealization {
  std::vector<double> eta;  // one per interior bond (L - 3)
  std::vector<double> mu;   // left and right end bonds
};

/// Deterministic in (seed, draw_index); independent of evaluation order.
NoiseRealization sample_realization(const NoiseModel& model, const ChainSpec& spec, std::uint64_t draw_index);

/// Scales every entry of each bond tensor; theta and axis are untouched.
ChainSpec apply_noise(const ChainSpec& spec, const NoiseRealization& realization);

struct DisorderAverage {
  FidelitySeries mean_curve;  // pointwise mean; t_max/f_max are its grid peak
  std::vector<double> realization_f_max;
  double f_max_mean = 0.0;
  double f_max_std = 0.0;
  double f_max_stderr = 0.0;
};

DisorderAverage disorder_averaged_fidelity(const ChainSpec& spec, const NoiseModel& model, const TimeGrid& grid,
                                           int workers = 1);

}  // namespace holeqst
