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

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace holeqst {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Matrix2c = Eigen::Matrix2cd;

/// Largest chain the dense backend accepts (Hilbert dimension 2^14).
inline constexpr int kMaxSites = 14;
inline constexpr Eigen::Index kMaxDimension = Eigen::Index{1} << kMaxSites;

/// Tolerance on ||h - h^dagger||_max before a matrix is accepted as Hermitian.
inline constexpr double kHermitianTolerance = 1e-10;

/// Thrown when an instance exceeds the dense-storage cap.
class InstanceTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Thrown when a numerical routine cannot produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PauliAxis { Identity, X, Y, Z };

/// How energies in MHz turn into phases: 2*pi*f*t (default) or f*t.
enum class PhaseConvention { TwoPi, Unity };

inline double phase_factor(PhaseConvention convention) {
  return convention == PhaseConvention::TwoPi ? 2.0 * 3.14159265358979323846 : 1.0;
}

Matrix2c pauli(PauliAxis axis);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// I (x) ... (x) op (x) ... (x) I with `op` at `site` (1-based, site 1 is the
/// most significant tensor factor).
ComplexMatrix embed_site_operator(const ComplexMatrix& op, int site, int num_sites);

/// Bit position of `site` in a computational-basis index. Site 1 is the most
/// significant qubit; bit value 0 encodes spin up.
inline int site_bit(int site, int num_sites) { return num_sites - site; }

/// Adds coeff * (op_1 at site_1)(op_2 at site_2)... to `target` without
/// materializing identity factors. Sites must be distinct.
void add_local_product(ComplexMatrix& target, Complex coeff,
                       std::span<const std::pair<int, Matrix2c>> factors, int num_sites);

double max_abs(const ComplexMatrix& m);
double hermiticity_defect(const ComplexMatrix& m);

/// Normalized amplitude vector over 2^L basis states.
class QuantumState {
 public:
  QuantumState() = default;

  /// Validates unit norm (within `tolerance`) and power-of-two dimension.
  static QuantumState from_amplitudes(ComplexVector amplitudes, double tolerance = 1e-10);
  /// Rescales to unit norm; rejects the zero vector.
  static QuantumState normalized(ComplexVector amplitudes);
  static QuantumState basis(int num_sites, std::uint64_t index);

  const ComplexVector& amplitudes() const { return amplitudes_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  int num_sites() const { return num_sites_; }

  Complex inner(const QuantumState& other) const { return amplitudes_.dot(other.amplitudes_); }
  double norm() const { return amplitudes_.norm(); }

 private:
  explicit QuantumState(ComplexVector amplitudes);

  ComplexVector amplitudes_;
  int num_sites_ = 0;
};

QuantumState tensor(const QuantumState& a, const QuantumState& b);

struct EigenSystem {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // columns, unitary
};

/// Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix.
/// Input is symmetrized after the Hermiticity check. Each eigenvector's
/// largest-magnitude amplitude is made real and positive, so output is
/// reproducible for identical input.
EigenSystem hermitian_eig(const ComplexMatrix& h);

/// Rotates `v` so that its first largest-magnitude amplitude is real positive.
void fix_global_phase(Eigen::Ref<ComplexVector> v);

/// V exp(-i*phase(Lambda, t)) V^dagger psi0, with t in microseconds.
QuantumState evolve(const EigenSystem& eig, const QuantumState& psi0, double t_us,
                    PhaseConvention convention = PhaseConvention::TwoPi);

}  // namespace holeqst
