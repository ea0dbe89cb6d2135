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

#include "holeqst/dynamics.hpp"
#include "holeqst/linalg.hpp"
#include "holeqst/model.hpp"

namespace holeqst {

/// Couplings as they enter the two-spin closed forms: the 1/4 of the bond
/// Hamiltonian is absorbed, K = J / 4 (MHz). Every closed-form path goes
/// through this so analytic and numeric phases share one convention.
Matrix3 formula_couplings(const ExchangeTensor& jt);

/// Exact dynamics of one bond started in |up down>, valid when the tensor has
/// no single-flip (xz, yz, zx, zy) entries.
struct TwoSpinSolution {
  double omega = 0.0;                // MHz, sqrt((Kxy-Kyx)^2 + (Kxx+Kyy)^2)
  Complex transfer_amplitude{};      // coefficient of sin(Omega t) |down up>
  double global_phase_rate = 0.0;    // MHz, Kzz

  /// e^{i p Kzz t} [cos(p Omega t)|ud> + amplitude sin(p Omega t)|du>], p the
  /// phase factor of `phase`.
  QuantumState at(double t_us, PhaseConvention phase = PhaseConvention::TwoPi) const;
};

TwoSpinSolution two_spin_solution(const ExchangeTensor& jt);
QuantumState two_spin_closed_form(const ExchangeTensor& jt, double t_us,
                                  PhaseConvention phase = PhaseConvention::TwoPi);

/// Two-spin channel Hamiltonian J S.R.S + h.(S_2 + S_3), written out entry by
/// entry in the basis {uu, ud, du, dd}.
ComplexMatrix channel_matrix_4x4(const ExchangeTensor& jt, const Vector3& h);

/// e^{i phi} such that (|ud> +- e^{i phi}|du>)/sqrt(2) diagonalize the
/// {ud, du} block of the bond Hamiltonian.
Complex afm_block_phase(const ExchangeTensor& jt);

struct TransportDoublet {
  double delta = 0.0;         // MHz, <L|H|L> - <R|H|R>
  Complex t_eff{};            // MHz, <L|H|R>
  double splitting = 0.0;     // MHz, E_+ - E_-
  double transfer_time = 0.0; // us, pi / (phase factor * splitting)
  bool isolated = false;      // next level farther than 10x the splitting
  bool degenerate_channel = false;
};

/// Detuning of the transport states |up,chi0,down> and |down,chi0,up> for an
/// L = 4 chain, assembled from the channel spin expectations, together with
/// the full-chain doublet that sets the transfer time.
TransportDoublet detuning_delta(const ChainSpec& spec, PhaseConvention phase = PhaseConvention::TwoPi);

/// pi / (E_+ - E_-) for the isolated doublet built on |L>, |R>. Throws
/// NumericalError when no isolated doublet exists.
double doublet_transfer_time(const ChainSpec& spec, PhaseConvention phase = PhaseConvention::TwoPi);

/// Second-order effective two-level model for an L = 4 chain at B = 0.
struct EffectiveTwoLevel {
  Complex T{};                    // MHz, <up S down| H_eff |down S up>
  double G_diag = 0.0;            // MHz, (H_eff)_11
  double G_diag_other = 0.0;      // MHz, (H_eff)_22
  double predicted_frequency = 0.0;  // MHz, 2|T|
  Complex printed_T{};            // closed-form cross-check, formula couplings
  double printed_G11 = 0.0;
};

EffectiveTwoLevel van_vleck_effective(const ExchangeTensor& channel, const ExchangeTensor& end);

/// Dominant frequency of a sampled F(t) from lobe spacing: samples with
/// F >= split form lobes, each lobe contributes its argmax time, and the
/// result is (n - 1) / (t_last - t_first). A lobe still open at the end of the
/// window is dropped. NaN when fewer than two lobes remain.
double lobe_frequency(std::span<const double> times, std::span<const double> values, double split = 0.5);

}  // namespace holeqst
