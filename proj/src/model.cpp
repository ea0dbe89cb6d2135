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

#include "holeqst/model.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace holeqst {

namespace {

const std::array<PauliAxis, 3> kAxes = {PauliAxis::X, PauliAxis::Y, PauliAxis::Z};

void check_sites(int site_a, int site_b, int num_sites) {
  if (num_sites < 1 || num_sites > kMaxSites) {
    throw InstanceTooLarge("chain length " + std::to_string(num_sites) + " outside [1, " +
                           std::to_string(kMaxSites) + "]");
  }
  for (int s : {site_a, site_b}) {
    if (s < 1 || s > num_sites) throw std::out_of_range("site " + std::to_string(s) + " out of range");
  }
}

void add_bond(ComplexMatrix& h, const ExchangeTensor& jt, int site_a, int site_b, int num_sites) {
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double coeff = 0.25 * jt(a, b);
      if (coeff == 0.0) continue;
      const std::array<std::pair<int, Matrix2c>, 2> factors = {
          std::pair{site_a, pauli(kAxes[a])}, std::pair{site_b, pauli(kAxes[b])}};
      add_local_product(h, coeff, factors, num_sites);
    }
  }
}

void add_zeeman(ComplexMatrix& h, const Vector3& B, const Matrix3& g, int site, int num_sites) {
  const Vector3 field = g * B;
  for (int a = 0; a < 3; ++a) {
    if (field(a) == 0.0) continue;
    const std::array<std::pair<int, Matrix2c>, 1> factors = {std::pair{site, pauli(kAxes[a])}};
    add_local_product(h, 0.5 * field(a), factors, num_sites);
  }
}

}  // namespace

SpinOrbitAxis SpinOrbitAxis::from_unit(const Vector3& n) {
  if (!n.allFinite() || std::abs(n.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("spin-orbit axis must be a unit vector");
  }
  return SpinOrbitAxis(n);
}

SpinOrbitAxis SpinOrbitAxis::normalized(const Vector3& raw) {
  const double n = raw.norm();
  if (!raw.allFinite() || !(n > 0.0)) throw std::invalid_argument("spin-orbit axis cannot be normalized");
  return SpinOrbitAxis(raw / n);
}

std::string to_string(ChannelInit init) {
  return init == ChannelInit::GroundState ? "channel-ground-state" : "pairwise-singlet";
}

ChannelInit channel_init_from_string(const std::string& name) {
  if (name == "channel-ground-state") return ChannelInit::GroundState;
  if (name == "pairwise-singlet") return ChannelInit::PairwiseSinglet;
  throw std::invalid_argument("unknown channel initialization '" + name + "'");
}

double ChainSpec::bond_multiplier(int bond) const {
  return bond_scale.empty() ? 1.0 : bond_scale.at(static_cast<size_t>(bond));
}

void ChainSpec::validate() const {
  if (L < 3) throw std::invalid_argument("ChainSpec: L must be at least 3");
  if (L > kMaxSites) {
    throw InstanceTooLarge("ChainSpec: L=" + std::to_string(L) + " exceeds the dense limit of " +
                           std::to_string(kMaxSites));
  }
  if (!(J0 > 0.0) || !std::isfinite(J0)) throw std::invalid_argument("ChainSpec: J0 must be positive");
  if (!(j0 > 0.0) || !std::isfinite(j0)) throw std::invalid_argument("ChainSpec: j0 must be positive");
  if (!std::isfinite(theta)) throw std::invalid_argument("ChainSpec: theta must be finite");
  if (!B.allFinite() || !g_boundary.allFinite() || !g_channel.allFinite()) {
    throw std::invalid_argument("ChainSpec: field and g-tensors must be finite");
  }
  if (init == ChannelInit::PairwiseSinglet && channel_length() % 2 != 0) {
    throw std::invalid_argument("ChainSpec: pairwise-singlet initialization needs an even channel");
  }
  if (!bond_scale.empty()) {
    if (bond_scale.size() != static_cast<size_t>(L - 1)) {
      throw std::invalid_argument("ChainSpec: bond_scale must have L-1 entries");
    }
    for (double s : bond_scale) {
      if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("ChainSpec: bond scales must be positive");
    }
  }
}

Matrix3 rotation_matrix(const SpinOrbitAxis& axis, double theta) {
  const Vector3& n = axis.vector();
  if (std::abs(n.norm() - 1.0) > 1e-9) throw std::invalid_argument("rotation_matrix: axis not normalized");
  Matrix3 cross;
  cross << 0.0, -n.z(), n.y(),  //
      n.z(), 0.0, -n.x(),       //
      -n.y(), n.x(), 0.0;
  const double c = std::cos(theta), s = std::sin(theta);
  return c * Matrix3::Identity() + (1.0 - c) * n * n.transpose() + s * cross;
}

ExchangeTensor rotation_exchange(double J0, const SpinOrbitAxis& axis, double theta) {
  if (!(J0 > 0.0)) throw std::invalid_argument("rotation_exchange: J0 must be positive");
  return {J0 * rotation_matrix(axis, theta)};
}

ComplexMatrix bond_hamiltonian(const ExchangeTensor& jt, int site_a, int site_b, int num_sites) {
  check_sites(site_a, site_b, num_sites);
  if (site_a == site_b) throw std::invalid_argument("bond_hamiltonian: sites must differ");
  const Eigen::Index dim = Eigen::Index{1} << num_sites;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  add_bond(h, jt, site_a, site_b, num_sites);
  return h;
}

ComplexMatrix zeeman_term(const Vector3& B, const Matrix3& g, int site, int num_sites) {
  check_sites(site, site, num_sites);
  const Eigen::Index dim = Eigen::Index{1} << num_sites;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  add_zeeman(h, B, g, site, num_sites);
  return h;
}

ExchangeTensor bond_exchange(const ChainSpec& spec, int bond) {
  const double base = spec.is_end_bond(bond) ? spec.j0 : spec.J0;
  return rotation_exchange(base, spec.axis, spec.theta).scaled(spec.bond_multiplier(bond));
}

ComplexMatrix build_chain_hamiltonian(const ChainSpec& spec) {
  spec.validate();
  const int L = spec.L;
  const Eigen::Index dim = Eigen::Index{1} << L;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int bond = 0; bond < L - 1; ++bond) add_bond(h, bond_exchange(spec, bond), bond + 1, bond + 2, L);
  for (int site = 1; site <= L; ++site) {
    const bool boundary = site == 1 || site == L;
    add_zeeman(h, spec.B, boundary ? spec.g_boundary : spec.g_channel, site, L);
  }
  return h;
}

ComplexMatrix build_channel_hamiltonian(const ChainSpec& spec) {
  spec.validate();
  const int M = spec.channel_length();
  const Eigen::Index dim = Eigen::Index{1} << M;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  // Interior bond b (1..L-3) couples chain sites b+1, b+2 = channel sites b, b+1.
  for (int bond = 1; bond <= spec.L - 3; ++bond) add_bond(h, bond_exchange(spec, bond), bond, bond + 1, M);
  for (int site = 1; site <= M; ++site) add_zeeman(h, spec.B, spec.g_channel, site, M);
  return h;
}

SpinOrbitParameters soc_from_field(const FieldGeometry& geometry) {
  if (std::abs(geometry.k.norm() - 1.0) > 1e-9) throw std::invalid_argument("soc_from_field: k must be a unit vector");
  if (!(geometry.d_nm > 0.0)) throw std::invalid_argument("soc_from_field: d must be positive");
  if (!(geometry.lambda_so_per_inverse_E > 0.0)) {
    throw std::invalid_argument("soc_from_field: calibration must be positive");
  }
  const double field = geometry.E.norm();
  if (!(field > 0.0)) throw std::invalid_argument("soc_from_field: zero electric field");
  const Vector3 direction = geometry.k.cross(geometry.E);
  if (direction.norm() <= 1e-12 * field) {
    throw std::invalid_argument("soc_from_field: E parallel to k leaves the axis undefined");
  }
  const double lambda_so = geometry.lambda_so_per_inverse_E / field;
  return {2.0 * geometry.d_nm / lambda_so, SpinOrbitAxis::normalized(direction)};
}

std::vector<double> commensurate_angles(int L, int max_n) {
  if (L < 2) throw std::invalid_argument("commensurate_angles: L must be at least 2");
  std::vector<double> out;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int n = 0; n <= max_n; ++n) {
    const double theta = two_pi * n / (L - 1);
    if (theta > two_pi * (1.0 + 1e-12)) break;
    out.push_back(theta);
  }
  return out;
}

}  // namespace holeqst
