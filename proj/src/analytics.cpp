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

#include "holeqst/analytics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace holeqst {

namespace {

constexpr Complex kI{0.0, 1.0};

double tensor_scale(const ExchangeTensor& jt) { return std::max(1.0, jt.j.cwiseAbs().maxCoeff()); }

constexpr double kSpectatorWeight = 1e-12;

struct Doublet {
  double splitting;
  bool isolated;
};

Doublet find_doublet(const EigenSystem& eig, const ComplexVector& left, const ComplexVector& right) {
  const Eigen::Index n = eig.eigenvalues.size();
  std::vector<std::pair<double, Eigen::Index>> weight;
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto v = eig.eigenvectors.col(k);
    weight.emplace_back(std::norm(v.dot(left)) + std::norm(v.dot(right)), k);
  }
  std::stable_sort(weight.begin(), weight.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  const double e1 = eig.eigenvalues(weight[0].second);
  const double e2 = eig.eigenvalues(weight[1].second);
  const double splitting = std::abs(e1 - e2);
  double nearest = std::numeric_limits<double>::infinity();
  // Levels with no weight on span{L, R} (other symmetry sectors) never enter
  // the dynamics, so they do not count against isolation.
  for (const auto& [w, k] : weight) {
    if (k == weight[0].second || k == weight[1].second || w <= kSpectatorWeight) continue;
    nearest = std::min({nearest, std::abs(eig.eigenvalues(k) - e1), std::abs(eig.eigenvalues(k) - e2)});
  }
  return {splitting, nearest > 10.0 * splitting};
}

struct TransportStates {
  ComplexVector left, right;
  bool degenerate;
};

TransportStates transport_states(const ChainSpec& spec) {
  const ChannelGroundState gs = channel_ground_state(spec);
  const QuantumState up = QuantumState::basis(1, 0), down = QuantumState::basis(1, 1);
  return {tensor(tensor(up, gs.state), down).amplitudes(), tensor(tensor(down, gs.state), up).amplitudes(),
          gs.degenerate};
}

}  // namespace

Matrix3 formula_couplings(const ExchangeTensor& jt) { return 0.25 * jt.j; }

TwoSpinSolution two_spin_solution(const ExchangeTensor& jt) {
  const Matrix3& j = jt.j;
  const double tol = 1e-12 * tensor_scale(jt);
  for (auto [a, b] : std::array<std::pair<int, int>, 4>{{{0, 2}, {1, 2}, {2, 0}, {2, 1}}}) {
    if (std::abs(j(a, b)) > tol) {
      throw std::invalid_argument("two_spin_closed_form: tensor has single-flip (leakage) entries");
    }
  }
  const Matrix3 k = formula_couplings(jt);
  TwoSpinSolution s;
  const double sym = k(0, 0) + k(1, 1);
  const double dm = k(0, 1) - k(1, 0);
  s.omega = std::hypot(dm, sym);
  s.global_phase_rate = k(2, 2);
  s.transfer_amplitude = s.omega > 0.0 ? (-kI * sym - dm) / s.omega : Complex{};
  return s;
}

QuantumState TwoSpinSolution::at(double t_us, PhaseConvention phase) const {
  const double p = phase_factor(phase) * t_us;
  const Complex global = std::polar(1.0, p * global_phase_rate);
  ComplexVector v = ComplexVector::Zero(4);
  v(1) = global * std::cos(p * omega);
  v(2) = global * transfer_amplitude * std::sin(p * omega);
  return QuantumState::from_amplitudes(std::move(v), 1e-9);
}

QuantumState two_spin_closed_form(const ExchangeTensor& jt, double t_us, PhaseConvention phase) {
  return two_spin_solution(jt).at(t_us, phase);
}

ComplexMatrix channel_matrix_4x4(const ExchangeTensor& jt, const Vector3& h) {
  const Matrix3 k = formula_couplings(jt);
  const double xx = k(0, 0), xy = k(0, 1), xz = k(0, 2);
  const double yx = k(1, 0), yy = k(1, 1), yz = k(1, 2);
  const double zx = k(2, 0), zy = k(2, 1), zz = k(2, 2);
  const Complex h_minus = 0.5 * Complex(h.x(), -h.y());

  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = zz + h.z();
  m(1, 1) = -zz;
  m(2, 2) = -zz;
  m(3, 3) = zz - h.z();
  // Single flips carry the spectator's sigma_z eigenvalue (+1 up, -1 down).
  m(0, 1) = Complex(zx, -zy) + h_minus;
  m(0, 2) = Complex(xz, -yz) + h_minus;
  m(1, 3) = -Complex(xz, -yz) + h_minus;
  m(2, 3) = -Complex(zx, -zy) + h_minus;
  m(0, 3) = Complex(xx - yy, -(xy + yx));
  m(1, 2) = Complex(xx + yy, xy - yx);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < r; ++c) m(r, c) = std::conj(m(c, r));
  return m;
}

Complex afm_block_phase(const ExchangeTensor& jt) {
  const Matrix3& j = jt.j;
  const Complex a(j(0, 0) + j(1, 1), j(0, 1) - j(1, 0));
  if (std::abs(a) <= 1e-12 * tensor_scale(jt)) {
    throw std::invalid_argument("afm_block_phase: vanishing block coupling leaves the phase undefined");
  }
  return std::conj(a) / std::abs(a);
}

TransportDoublet detuning_delta(const ChainSpec& spec, PhaseConvention phase) {
  spec.validate();
  if (spec.L != 4) throw std::invalid_argument("detuning_delta: requires L = 4");
  const ChannelGroundState gs = channel_ground_state(spec);
  const ComplexVector& chi = gs.state.amplitudes();

  // <S_2^b>, <S_3^a> in the two-spin channel state.
  Vector3 s2, s3;
  const std::array<PauliAxis, 3> axes = {PauliAxis::X, PauliAxis::Y, PauliAxis::Z};
  for (int a = 0; a < 3; ++a) {
    const ComplexMatrix op2 = kron(pauli(axes[a]), pauli(PauliAxis::Identity));
    const ComplexMatrix op3 = kron(pauli(PauliAxis::Identity), pauli(axes[a]));
    s2(a) = 0.5 * chi.dot(op2 * chi).real();
    s3(a) = 0.5 * chi.dot(op3 * chi).real();
  }
  const Matrix3 left = bond_exchange(spec, 0).j;
  const Matrix3 right = bond_exchange(spec, 2).j;

  TransportDoublet out;
  out.degenerate_channel = gs.degenerate;
  out.delta = left.row(2).dot(s2) - right.col(2).dot(s3);

  const TransportStates states = transport_states(spec);
  const ComplexMatrix h = build_chain_hamiltonian(spec);
  out.t_eff = states.left.dot(h * states.right);
  const Doublet d = find_doublet(hermitian_eig(h), states.left, states.right);
  out.splitting = d.splitting;
  out.isolated = d.isolated;
  out.transfer_time = std::numbers::pi / (phase_factor(phase) * d.splitting);
  return out;
}

double doublet_transfer_time(const ChainSpec& spec, PhaseConvention phase) {
  spec.validate();
  const TransportStates states = transport_states(spec);
  const Doublet d = find_doublet(hermitian_eig(build_chain_hamiltonian(spec)), states.left, states.right);
  if (!d.isolated || !(d.splitting > 0.0)) {
    throw NumericalError("doublet_transfer_time: no isolated transport doublet");
  }
  return std::numbers::pi / (phase_factor(phase) * d.splitting);
}

EffectiveTwoLevel van_vleck_effective(const ExchangeTensor& channel, const ExchangeTensor& end) {
  if (!(end.j.norm() < channel.j.norm())) {
    throw std::invalid_argument("van_vleck_effective: end coupling must be weaker than the channel coupling");
  }
  constexpr int L = 4;
  ComplexMatrix h0 = bond_hamiltonian(channel, 2, 3, L);
  ComplexMatrix h = h0 + bond_hamiltonian(end, 1, 2, L) + bond_hamiltonian(end, 3, 4, L);

  // Channel eigenstates: AFM block pair chi_-, chi_+ and the polarized pair.
  const Complex phase = afm_block_phase(channel);
  const double r = 1.0 / std::sqrt(2.0);
  ComplexVector chi_low = ComplexVector::Zero(4), chi_high = ComplexVector::Zero(4);
  chi_low(1) = r;
  chi_low(2) = -r * phase;
  chi_high(1) = r;
  chi_high(2) = r * phase;
  const ComplexVector up = ComplexVector::Unit(2, 0), down = ComplexVector::Unit(2, 1);
  const ComplexVector uu = ComplexVector::Unit(4, 0), dd = ComplexVector::Unit(4, 3);
  auto chain = [](const ComplexVector& a, const ComplexVector& c, const ComplexVector& b) -> ComplexVector {
    return kron(kron(a, c), b).col(0);
  };
  ComplexMatrix basis(16, 6);
  basis.col(0) = chain(up, chi_low, down);
  basis.col(1) = chain(down, chi_low, up);
  basis.col(2) = chain(up, chi_high, down);
  basis.col(3) = chain(down, chi_high, up);
  basis.col(4) = chain(up, dd, up);
  basis.col(5) = chain(down, uu, down);

  const ComplexMatrix hb = basis.adjoint() * h * basis;
  const ComplexMatrix e0 = basis.adjoint() * h0 * basis;
  std::array<double, 6> energy{};
  for (int i = 0; i < 6; ++i) energy[static_cast<size_t>(i)] = e0(i, i).real();

  const double scale = std::max(1.0, channel.j.cwiseAbs().maxCoeff());
  auto element = [&](int m, int n) {
    Complex sum = hb(m, n);
    for (int k = 2; k < 6; ++k) {
      const double dm = energy[static_cast<size_t>(m)] - energy[static_cast<size_t>(k)];
      const double dn = energy[static_cast<size_t>(n)] - energy[static_cast<size_t>(k)];
      if (std::abs(dm) < 1e-9 * scale || std::abs(dn) < 1e-9 * scale) {
        throw NumericalError("van_vleck_effective: vanishing energy denominator");
      }
      sum += hb(m, k) * hb(k, n) * 0.5 * (1.0 / dm + 1.0 / dn);
    }
    return sum;
  };

  EffectiveTwoLevel out;
  out.T = element(0, 1);
  out.G_diag = element(0, 0).real();
  out.G_diag_other = element(1, 1).real();
  out.predicted_frequency = 2.0 * std::abs(out.T);

  const Matrix3 K = formula_couplings(channel);
  const Matrix3 k = formula_couplings(end);
  const double Ksym = K(0, 0) + K(1, 1), Kdm = K(0, 1) - K(1, 0);
  const double ksym = k(0, 0) + k(1, 1), kdm = k(0, 1) - k(1, 0);
  out.printed_T = ksym * ksym * (2.0 * kI * K(2, 2) + Ksym + kI * Kdm) /
                  (Ksym * (-2.0 * kI * K(2, 2) + Ksym + 2.0 * K(2, 2)));
  out.printed_G11 = -K(0, 0) - K(1, 1) - K(2, 2) - 2.0 * k(2, 2) * k(2, 2) * Kdm * Kdm / Ksym -
                    kdm * kdm * ksym * ksym / (-2.0 * k(2, 2) + Ksym + 2.0 * K(2, 2));
  return out;
}

double lobe_frequency(std::span<const double> times, std::span<const double> values, double split) {
  if (times.size() != values.size()) throw std::invalid_argument("lobe_frequency: size mismatch");
  std::vector<double> peaks;
  std::size_t i = 0;
  while (i < values.size()) {
    if (values[i] < split) {
      ++i;
      continue;
    }
    std::size_t best = i;
    for (; i < values.size() && values[i] >= split; ++i) {
      if (values[i] > values[best]) best = i;
    }
    if (i < values.size()) peaks.push_back(times[best]);
  }
  if (peaks.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(peaks.size() - 1) / (peaks.back() - peaks.front());
}

}  // namespace holeqst
