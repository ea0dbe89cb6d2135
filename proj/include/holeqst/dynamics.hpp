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

#include <span>
#include <vector>

#include "holeqst/linalg.hpp"
#include "holeqst/model.hpp"

namespace holeqst {

/// Relative gap (in units of J0) below which the channel ground state counts
/// as degenerate.
inline constexpr double kDegeneracyTolerance = 1e-8;

struct ChannelGroundState {
  QuantumState state;  // over the L-2 channel spins
  double gap = 0.0;    // MHz, E1 - E0 of the channel Hamiltonian
  bool degenerate = false;
};

struct InitialState {
  ChannelInit kind = ChannelInit::GroundState;
  QuantumState state;  // |up>_1 (x) channel (x) |down>_L
  double channel_gap = 0.0;
  bool degenerate = false;
};

/// Uniform sampling window plus the phase convention of the propagator.
struct TimeGrid {
  double window_us = 10.0;
  int points = 4001;
  PhaseConvention phase = PhaseConvention::TwoPi;

  std::vector<double> times() const;
  void validate() const;
};

struct FidelitySeries {
  std::vector<double> times;
  std::vector<double> values;
  double t_max = 0.0;
  double f_max = 0.0;
  bool degenerate = false;
};

/// Ground state of the channel-only Hamiltonian. When the lowest level is
/// degenerate, the state in that subspace closest to the theta = 0 reference
/// ground state is returned and `degenerate` is set.
ChannelGroundState channel_ground_state(const ChainSpec& spec);

/// Product of singlets on channel pairs (1,2), (3,4), ...
QuantumState pairwise_singlet_state(int channel_len);

InitialState compose_initial_state(const ChainSpec& spec);

/// Single-site reduced density matrix (partial trace over all other sites).
ComplexMatrix reduced_density_matrix(const QuantumState& psi, int site);

/// <target| rho |target> for a single-qubit density matrix.
double fidelity(const ComplexMatrix& rho, const QuantumState& target);

/// <sigma_z> on every site.
RealVector site_polarization_profile(const QuantumState& psi);

/// Receiver fidelity F(t) = <up| rho_L(t) |up> for one chain, with the
/// Hamiltonian diagonalized once up front.
class TransferFidelity {
 public:
  explicit TransferFidelity(const ChainSpec& spec, PhaseConvention phase = PhaseConvention::TwoPi);

  double operator()(double t_us) const;
  std::vector<double> sample(std::span<const double> times_us) const;

  /// Grid scan followed by golden-section refinement around the best grid point.
  FidelitySeries series(const TimeGrid& grid) const;

  const ChainSpec& spec() const { return spec_; }
  const EigenSystem& eigensystem() const { return eig_; }
  const InitialState& initial() const { return initial_; }

 private:
  ChainSpec spec_;
  PhaseConvention phase_;
  EigenSystem eig_;
  InitialState initial_;
  RealVector energies_;   // eigenvalues carrying weight in the initial state
  ComplexMatrix weights_; // receiver-up rows of V, columns scaled by V^dagger psi0
};

FidelitySeries fidelity_series(const ChainSpec& spec, const TimeGrid& grid = {});

/// Golden-section maximization of `f` on [lo, hi].
struct RefinedMaximum {
  double t;
  double value;
};
template <typename F>
RefinedMaximum golden_section_maximize(F&& f, double lo, double hi, int iterations = 31, double tolerance = 1e-6) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations && (b - a) > tolerance; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? RefinedMaximum{c, fc} : RefinedMaximum{d, fd};
}

}  // namespace holeqst
