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

#include "holeqst/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holeqst {

namespace {

constexpr double kWeightCutoff = 1e-30;  // |<E_k|psi0>|^2 below this is dropped

// Columns of `subspace` span a degenerate eigenspace. Picks the normalized
// projection of `hint` when it has weight there, otherwise of the first basis
// state with maximal weight in the subspace.
ComplexVector select_in_subspace(const ComplexMatrix& subspace, const ComplexVector* hint) {
  if (hint != nullptr) {
    ComplexVector proj = subspace * (subspace.adjoint() * *hint);
    if (proj.norm() > 1e-6) return proj / proj.norm();
  }
  const RealVector weight = subspace.cwiseAbs2().rowwise().sum();
  Eigen::Index best = 0;
  const double top = weight.maxCoeff();
  for (Eigen::Index i = 0; i < weight.size(); ++i) {
    if (weight(i) >= top * (1.0 - 1e-9)) {
      best = i;
      break;
    }
  }
  ComplexVector proj = subspace * subspace.row(best).adjoint();
  return proj / proj.norm();
}

struct LowestLevel {
  ComplexVector state;
  double gap;
  bool degenerate;
};

LowestLevel lowest_level(const ComplexMatrix& h, double J0, const ComplexVector* hint) {
  const EigenSystem eig = hermitian_eig(h);
  const Eigen::Index n = eig.eigenvalues.size();
  const double threshold = kDegeneracyTolerance * J0;
  Eigen::Index count = 1;
  while (count < n && eig.eigenvalues(count) - eig.eigenvalues(0) < threshold) ++count;
  const double gap = n > 1 ? eig.eigenvalues(1) - eig.eigenvalues(0) : 0.0;
  if (count == 1) return {eig.eigenvectors.col(0), gap, false};
  ComplexVector v = select_in_subspace(eig.eigenvectors.leftCols(count), hint);
  fix_global_phase(v);
  return {v, gap, true};
}

}  // namespace

std::vector<double> TimeGrid::times() const {
  validate();
  std::vector<double> t(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i) t[static_cast<size_t>(i)] = window_us * i / (points - 1);
  return t;
}

void TimeGrid::validate() const {
  if (!(window_us > 0.0) || !std::isfinite(window_us)) throw std::invalid_argument("TimeGrid: window must be positive");
  if (points < 2) throw std::invalid_argument("TimeGrid: need at least 2 grid points");
}

ChannelGroundState channel_ground_state(const ChainSpec& spec) {
  spec.validate();
  const ComplexMatrix h = build_channel_hamiltonian(spec);
  ComplexVector reference;
  const ComplexVector* hint = nullptr;
  if (spec.theta != 0.0) {
    ChainSpec flat = spec;
    flat.theta = 0.0;
    reference = lowest_level(build_channel_hamiltonian(flat), spec.J0, nullptr).state;
    hint = &reference;
  }
  LowestLevel level = lowest_level(h, spec.J0, hint);
  return {QuantumState::normalized(std::move(level.state)), level.gap, level.degenerate};
}

QuantumState pairwise_singlet_state(int channel_len) {
  if (channel_len < 2 || channel_len % 2 != 0) {
    throw std::invalid_argument("pairwise_singlet_state: channel length must be even and >= 2");
  }
  ComplexVector singlet = ComplexVector::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);   // |up down>
  singlet(2) = -1.0 / std::sqrt(2.0);  // |down up>
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (int p = 0; p < channel_len / 2; ++p) out = kron(out, singlet);
  return QuantumState::normalized(out.col(0));
}

InitialState compose_initial_state(const ChainSpec& spec) {
  spec.validate();
  InitialState init;
  init.kind = spec.init;
  QuantumState channel;
  if (spec.init == ChannelInit::PairwiseSinglet) {
    channel = pairwise_singlet_state(spec.channel_length());
  } else {
    ChannelGroundState gs = channel_ground_state(spec);
    channel = std::move(gs.state);
    init.channel_gap = gs.gap;
    init.degenerate = gs.degenerate;
  }
  init.state = tensor(tensor(QuantumState::basis(1, 0), channel), QuantumState::basis(1, 1));
  return init;
}

ComplexMatrix reduced_density_matrix(const QuantumState& psi, int site) {
  const int L = psi.num_sites();
  if (site < 1 || site > L) throw std::out_of_range("reduced_density_matrix: site out of range");
  const int bit = site_bit(site, L);
  const Eigen::Index mask = Eigen::Index{1} << bit;
  const auto& a = psi.amplitudes();
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    if (i & mask) continue;
    const Complex up = a(i), down = a(i | mask);
    rho(0, 0) += up * std::conj(up);
    rho(0, 1) += up * std::conj(down);
    rho(1, 0) += down * std::conj(up);
    rho(1, 1) += down * std::conj(down);
  }
  return rho;
}

double fidelity(const ComplexMatrix& rho, const QuantumState& target) {
  if (rho.rows() != 2 || rho.cols() != 2) throw std::invalid_argument("fidelity: rho must be 2x2");
  if (target.dim() != 2) throw std::invalid_argument("fidelity: target must be a single-qubit state");
  constexpr double tol = 1e-9;
  if (hermiticity_defect(rho) > tol || std::abs(rho.trace() - Complex(1.0)) > tol) {
    throw std::invalid_argument("fidelity: rho is not a unit-trace Hermitian matrix");
  }
  const Eigen::SelfAdjointEigenSolver<Matrix2c> es(Matrix2c(0.5 * (rho + rho.adjoint())), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) throw std::invalid_argument("fidelity: rho is not positive semidefinite");
  const auto& t = target.amplitudes();
  return (t.adjoint() * rho * t)(0, 0).real();
}

RealVector site_polarization_profile(const QuantumState& psi) {
  const int L = psi.num_sites();
  RealVector out(L);
  for (int site = 1; site <= L; ++site) {
    const ComplexMatrix rho = reduced_density_matrix(psi, site);
    out(site - 1) = (rho(0, 0) - rho(1, 1)).real();
  }
  return out;
}

TransferFidelity::TransferFidelity(const ChainSpec& spec, PhaseConvention phase)
    : spec_(spec), phase_(phase), eig_(hermitian_eig(build_chain_hamiltonian(spec))),
      initial_(compose_initial_state(spec)) {
  const ComplexVector c = eig_.eigenvectors.adjoint() * initial_.state.amplitudes();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    if (std::norm(c(k)) > kWeightCutoff) kept.push_back(k);
  }
  const Eigen::Index rows = eig_.eigenvectors.rows() / 2;
  energies_.resize(static_cast<Eigen::Index>(kept.size()));
  weights_.resize(rows, static_cast<Eigen::Index>(kept.size()));
  // Receiver is site L = bit 0; spin up means even basis index.
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(kept.size()); ++j) {
    const Eigen::Index k = kept[static_cast<size_t>(j)];
    energies_(j) = eig_.eigenvalues(k);
    for (Eigen::Index r = 0; r < rows; ++r) weights_(r, j) = eig_.eigenvectors(2 * r, k) * c(k);
  }
}

double TransferFidelity::operator()(double t_us) const {
  const double scale = phase_factor(phase_) * t_us;
  ComplexVector e(energies_.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = std::polar(1.0, -scale * energies_(k));
  return (weights_ * e).squaredNorm();
}

std::vector<double> TransferFidelity::sample(std::span<const double> times_us) const {
  constexpr std::size_t kChunk = 256;
  std::vector<double> out(times_us.size());
  const double factor = phase_factor(phase_);
  ComplexMatrix phases(energies_.size(), static_cast<Eigen::Index>(kChunk));
  for (std::size_t start = 0; start < times_us.size(); start += kChunk) {
    const std::size_t n = std::min(kChunk, times_us.size() - start);
    for (std::size_t j = 0; j < n; ++j) {
      const double scale = factor * times_us[start + j];
      for (Eigen::Index k = 0; k < energies_.size(); ++k) {
        phases(k, static_cast<Eigen::Index>(j)) = std::polar(1.0, -scale * energies_(k));
      }
    }
    const ComplexMatrix amps = weights_ * phases.leftCols(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) out[start + j] = amps.col(static_cast<Eigen::Index>(j)).squaredNorm();
  }
  return out;
}

FidelitySeries TransferFidelity::series(const TimeGrid& grid) const {
  FidelitySeries s;
  s.times = grid.times();
  s.values = sample(s.times);
  s.degenerate = initial_.degenerate;
  const auto best = static_cast<size_t>(std::max_element(s.values.begin(), s.values.end()) - s.values.begin());
  const double lo = s.times[best == 0 ? 0 : best - 1];
  const double hi = s.times[std::min(best + 1, s.times.size() - 1)];
  const RefinedMaximum refined = golden_section_maximize([this](double t) { return (*this)(t); }, lo, hi);
  s.t_max = refined.value > s.values[best] ? refined.t : s.times[best];
  s.f_max = (*this)(s.t_max);
  return s;
}

FidelitySeries fidelity_series(const ChainSpec& spec, const TimeGrid& grid) {
  grid.validate();
  return TransferFidelity(spec, grid.phase).series(grid);
}

}  // namespace holeqst
