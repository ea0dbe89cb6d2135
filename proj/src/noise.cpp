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

#include "holeqst/noise.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "holeqst/parallel.hpp"

namespace holeqst {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// The engine is fully specified by the standard; the transforms below are
// written out because the std distributions are implementation-defined.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t draw) : engine_(splitmix64(seed ^ splitmix64(draw))) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double draw(const NoiseModel& model) {
    if (model.strength == 0.0) return 0.0;
    if (model.distribution == NoiseDistribution::Uniform) return model.strength * (2.0 * unit() - 1.0);
    const double u1 = 1.0 - unit();  // (0, 1]
    const double u2 = unit();
    const double gauss = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return std::max(model.strength * gauss, -0.9);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Correlated: return "correlated";
    case NoiseKind::Split: return "split";
    case NoiseKind::Uncorrelated: return "uncorrelated";
  }
  return "?";
}

std::string to_string(NoiseDistribution distribution) {
  return distribution == NoiseDistribution::Uniform ? "uniform" : "gaussian";
}

std::string to_string(SplitTarget target) {
  switch (target) {
    case SplitTarget::Both: return "both";
    case SplitTarget::Intra: return "intra";
    case SplitTarget::End: return "end";
  }
  return "?";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "correlated") return NoiseKind::Correlated;
  if (name == "split") return NoiseKind::Split;
  if (name == "uncorrelated") return NoiseKind::Uncorrelated;
  throw std::invalid_argument("unknown noise kind '" + name + "'");
}

NoiseDistribution noise_distribution_from_string(const std::string& name) {
  if (name == "uniform") return NoiseDistribution::Uniform;
  if (name == "gaussian") return NoiseDistribution::Gaussian;
  throw std::invalid_argument("unknown noise distribution '" + name + "'");
}

SplitTarget split_target_from_string(const std::string& name) {
  if (name == "both") return SplitTarget::Both;
  if (name == "intra") return SplitTarget::Intra;
  if (name == "end") return SplitTarget::End;
  throw std::invalid_argument("unknown split target '" + name + "'");
}

void NoiseModel::validate() const {
  if (!(strength >= 0.0) || !std::isfinite(strength)) throw std::invalid_argument("NoiseModel: strength must be >= 0");
  if (realizations < 1) throw std::invalid_argument("NoiseModel: need at least one realization");
}

NoiseRealization sample_realization(const NoiseModel& model, const ChainSpec& spec, std::uint64_t draw_index) {
  model.validate();
  const auto interior = static_cast<size_t>(std::max(spec.L - 3, 0));
  NoiseRealization r{std::vector<double>(interior, 0.0), std::vector<double>(2, 0.0)};
  Stream stream(model.seed, draw_index);
  switch (model.kind) {
    case NoiseKind::Correlated: {
      const double eta = stream.draw(model);
      std::fill(r.eta.begin(), r.eta.end(), eta);
      std::fill(r.mu.begin(), r.mu.end(), eta);
      break;
    }
    case NoiseKind::Split: {
      // Both values are always drawn so the stream layout ignores the target.
      const double eta = stream.draw(model);
      const double mu = stream.draw(model);
      if (model.split_target != SplitTarget::End) std::fill(r.eta.begin(), r.eta.end(), eta);
      if (model.split_target != SplitTarget::Intra) std::fill(r.mu.begin(), r.mu.end(), mu);
      break;
    }
    case NoiseKind::Uncorrelated:
      r.mu[0] = stream.draw(model);
      for (auto& e : r.eta) e = stream.draw(model);
      r.mu[1] = stream.draw(model);
      break;
  }
  return r;
}

ChainSpec apply_noise(const ChainSpec& spec, const NoiseRealization& realization) {
  if (realization.mu.size() != 2 || realization.eta.size() != static_cast<size_t>(std::max(spec.L - 3, 0))) {
    throw std::invalid_argument("apply_noise: realization does not match the chain's bond counts");
  }
  ChainSpec out = spec;
  out.bond_scale.assign(static_cast<size_t>(spec.L - 1), 1.0);
  for (int bond = 0; bond < spec.L - 1; ++bond) {
    double m;
    if (bond == 0) m = realization.mu[0];
    else if (bond == spec.L - 2) m = realization.mu[1];
    else m = realization.eta[static_cast<size_t>(bond - 1)];
    if (!(m > -1.0)) throw std::invalid_argument("apply_noise: multiplier <= -1 would flip the coupling sign");
    out.bond_scale[static_cast<size_t>(bond)] = spec.bond_multiplier(bond) * (1.0 + m);
  }
  return out;
}

DisorderAverage disorder_averaged_fidelity(const ChainSpec& spec, const NoiseModel& model, const TimeGrid& grid,
                                           int workers) {
  model.validate();
  grid.validate();
  const auto runs = parallel_map(static_cast<size_t>(model.realizations), workers, [&](std::size_t i) {
    return fidelity_series(apply_noise(spec, sample_realization(model, spec, i)), grid);
  });

  DisorderAverage out;
  out.mean_curve.times = grid.times();
  out.mean_curve.values.assign(out.mean_curve.times.size(), 0.0);
  // Running mean: identical realizations (zero strength) average to
  // themselves bit for bit.
  double count = 0.0;
  for (const auto& run : runs) {
    count += 1.0;
    for (size_t j = 0; j < run.values.size(); ++j) {
      out.mean_curve.values[j] += (run.values[j] - out.mean_curve.values[j]) / count;
    }
    out.realization_f_max.push_back(run.f_max);
    out.mean_curve.degenerate = out.mean_curve.degenerate || run.degenerate;
  }
  const double n = count;
  const auto peak = std::max_element(out.mean_curve.values.begin(), out.mean_curve.values.end());
  out.mean_curve.f_max = *peak;
  out.mean_curve.t_max = out.mean_curve.times[static_cast<size_t>(peak - out.mean_curve.values.begin())];

  count = 0.0;
  for (double f : out.realization_f_max) out.f_max_mean += (f - out.f_max_mean) / ++count;
  double var = 0.0;
  for (double f : out.realization_f_max) var += (f - out.f_max_mean) * (f - out.f_max_mean);
  out.f_max_std = runs.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  out.f_max_stderr = out.f_max_std / std::sqrt(n);
  return out;
}

}  // namespace holeqst
