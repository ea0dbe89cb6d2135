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
#include <vector>

#include "holeqst/linalg.hpp"

namespace holeqst {

/// Unit vector about which each exchange bond rotates the spin frame.
class SpinOrbitAxis {
 public:
  SpinOrbitAxis() : n_(0.0, 0.0, 1.0) {}

  /// Requires ||n|| = 1 within 1e-9.
  static SpinOrbitAxis from_unit(const Vector3& n);
  /// Normalizes any nonzero finite vector.
  static SpinOrbitAxis normalized(const Vector3& raw);

  static SpinOrbitAxis x() { return from_unit(Vector3::UnitX()); }
  static SpinOrbitAxis y() { return from_unit(Vector3::UnitY()); }
  static SpinOrbitAxis z() { return from_unit(Vector3::UnitZ()); }

  const Vector3& vector() const { return n_; }

 private:
  explicit SpinOrbitAxis(const Vector3& n) : n_(n) {}
  Vector3 n_;
};

/// Real 3x3 coupling between two spins, MHz.
struct ExchangeTensor {
  Matrix3 j = Matrix3::Zero();

  double operator()(int a, int b) const { return j(a, b); }
  ExchangeTensor scaled(double factor) const { return {j * factor}; }
};

enum class ChannelInit { GroundState, PairwiseSinglet };

std::string to_string(ChannelInit init);
ChannelInit channel_init_from_string(const std::string& name);

/// Physical description of one simulation instance. Sites 1 and L are the
/// sender and receiver; bonds (1,2) and (L-1,L) carry j0, interior bonds J0.
struct ChainSpec {
  int L = 4;
  double J0 = 160.0;  // MHz
  double j0 = 20.0;   // MHz
  double theta = 0.0; // radians
  SpinOrbitAxis axis = SpinOrbitAxis::z();
  Vector3 B = Vector3::Zero();  // MHz (mu_B = 1)
  Matrix3 g_boundary = Matrix3::Identity();
  Matrix3 g_channel = Matrix3::Identity();
  ChannelInit init = ChannelInit::GroundState;
  /// Per-bond exchange multipliers (bond b couples sites b+1 and b+2).
  /// Empty means all ones; otherwise size L-1 with entries > 0.
  std::vector<double> bond_scale;

  int channel_length() const { return L - 2; }
  bool is_end_bond(int bond) const { return bond == 0 || bond == L - 2; }
  double bond_multiplier(int bond) const;
  /// Throws std::invalid_argument on invariant violations.
  void validate() const;
};

/// Electric-field configuration controlling the spin-orbit angle and axis.
struct FieldGeometry {
  Vector3 E = Vector3::UnitY();  // arbitrary field units
  Vector3 k = Vector3::UnitX();  // array direction, unit
  double d_nm = 100.0;
  /// lambda_so = calibration / |E|; the default gives lambda_so = 100 nm at
  /// |E| = 1. Illustrative only.
  double lambda_so_per_inverse_E = 100.0;
};

struct SpinOrbitParameters {
  double theta;
  SpinOrbitAxis axis;
};

/// Rotation by `theta` about `axis` (right-handed):
/// R = cos(t) I + (1 - cos(t)) n n^T + sin(t) [n]_x.
Matrix3 rotation_matrix(const SpinOrbitAxis& axis, double theta);

ExchangeTensor rotation_exchange(double J0, const SpinOrbitAxis& axis, double theta);

/// (1/4) sum_ab J_ab sigma_a^a sigma_b^b on a chain of `num_sites`.
ComplexMatrix bond_hamiltonian(const ExchangeTensor& jt, int site_a, int site_b, int num_sites);

/// (1/2) (B . g) . sigma_site.
ComplexMatrix zeeman_term(const Vector3& B, const Matrix3& g, int site, int num_sites);

/// Exchange tensor on bond `bond` (0-based) of `spec`, including noise scale.
ExchangeTensor bond_exchange(const ChainSpec& spec, int bond);

ComplexMatrix build_chain_hamiltonian(const ChainSpec& spec);

/// Interior spins 2..L-1 only: interior bonds and channel g-tensor Zeeman terms.
ComplexMatrix build_channel_hamiltonian(const ChainSpec& spec);

SpinOrbitParameters soc_from_field(const FieldGeometry& geometry);

/// {2 pi n / (L - 1) : n = 0..max_n} restricted to [0, 2 pi].
std::vector<double> commensurate_angles(int L, int max_n);

}  // namespace holeqst
