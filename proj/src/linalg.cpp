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

#include "holeqst/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace holeqst {

namespace {

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(Eigen::Index n) {
  int k = 0;
  while ((Eigen::Index{1} << k) < n) ++k;
  return k;
}

// Dense Hermitian eigendecomposition of one block via divide and conquer.
void eig_block(ComplexMatrix& a, RealVector& w) {
  const auto n = static_cast<lapack_int>(a.rows());
  w.resize(n);
  if (n == 1) {
    w(0) = a(0, 0).real();
    a(0, 0) = 1.0;
    return;
  }
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data());
  if (info != 0) {
    throw NumericalError("zheevd failed to converge (info=" + std::to_string(info) + ")");
  }
}

// Connected components of the exact-nonzero pattern of a Hermitian matrix.
std::vector<std::vector<Eigen::Index>> exact_blocks(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  std::vector<Eigen::Index> parent(static_cast<size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (h(r, c) != Complex{0.0, 0.0}) {
        const auto a = find(r), b = find(c);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> blocks;
  std::vector<Eigen::Index> slot(static_cast<size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Eigen::Index>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(i);
  }
  return blocks;
}

}  // namespace

Matrix2c pauli(PauliAxis axis) {
  Matrix2c m;
  switch (axis) {
    case PauliAxis::Identity:
      m << 1.0, 0.0, 0.0, 1.0;
      break;
    case PauliAxis::X:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case PauliAxis::Y:
      m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
      break;
    case PauliAxis::Z:
      m << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.allFinite() || !b.allFinite()) throw std::invalid_argument("kron: non-finite input");
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > kMaxDimension || cols > kMaxDimension) {
    throw InstanceTooLarge("kron: dimension " + std::to_string(rows) + "x" + std::to_string(cols) +
                           " exceeds the dense limit of " + std::to_string(kMaxDimension));
  }
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix embed_site_operator(const ComplexMatrix& op, int site, int num_sites) {
  if (num_sites < 1 || num_sites > kMaxSites) {
    throw InstanceTooLarge("embed_site_operator: chain length " + std::to_string(num_sites) +
                           " outside [1, " + std::to_string(kMaxSites) + "]");
  }
  if (site < 1 || site > num_sites) {
    throw std::out_of_range("embed_site_operator: site " + std::to_string(site) +
                            " outside [1, " + std::to_string(num_sites) + "]");
  }
  if (op.rows() != 2 || op.cols() != 2) throw std::invalid_argument("embed_site_operator: op must be 2x2");
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int s = 1; s <= num_sites; ++s) out = kron(out, s == site ? op : id);
  return out;
}

void add_local_product(ComplexMatrix& target, Complex coeff,
                       std::span<const std::pair<int, Matrix2c>> factors, int num_sites) {
  const Eigen::Index dim = Eigen::Index{1} << num_sites;
  if (target.rows() != dim || target.cols() != dim) {
    throw std::invalid_argument("add_local_product: target dimension mismatch");
  }
  std::vector<int> bits;
  for (const auto& [site, op] : factors) {
    if (site < 1 || site > num_sites) {
      throw std::out_of_range("add_local_product: site " + std::to_string(site) + " out of range");
    }
    const int b = site_bit(site, num_sites);
    if (std::find(bits.begin(), bits.end(), b) != bits.end()) {
      throw std::invalid_argument("add_local_product: repeated site");
    }
    bits.push_back(b);
  }
  const std::size_t k = factors.size();
  Eigen::Index local_mask = 0;
  for (int b : bits) local_mask |= Eigen::Index{1} << b;
  for (Eigen::Index row = 0; row < dim; ++row) {
    const Eigen::Index rest = row & ~local_mask;
    for (std::uint64_t choice = 0; choice < (std::uint64_t{1} << k); ++choice) {
      Complex value = coeff;
      Eigen::Index col = rest;
      for (std::size_t f = 0; f < k && value != Complex{}; ++f) {
        const int rb = static_cast<int>((row >> bits[f]) & 1);
        const int cb = static_cast<int>((choice >> f) & 1);
        value *= factors[f].second(rb, cb);
        col |= static_cast<Eigen::Index>(cb) << bits[f];
      }
      if (value != Complex{}) target(row, col) += value;
    }
  }
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const ComplexMatrix& m) { return max_abs(m - m.adjoint()); }

QuantumState::QuantumState(ComplexVector amplitudes)
    : amplitudes_(std::move(amplitudes)), num_sites_(log2_exact(amplitudes_.size())) {}

QuantumState QuantumState::from_amplitudes(ComplexVector amplitudes, double tolerance) {
  if (!is_power_of_two(amplitudes.size())) {
    throw std::invalid_argument("QuantumState: dimension " + std::to_string(amplitudes.size()) +
                                " is not a power of two");
  }
  if (!amplitudes.allFinite()) throw std::invalid_argument("QuantumState: non-finite amplitude");
  if (std::abs(amplitudes.norm() - 1.0) > tolerance) {
    throw std::invalid_argument("QuantumState: norm deviates from 1");
  }
  return QuantumState(std::move(amplitudes));
}

QuantumState QuantumState::normalized(ComplexVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("QuantumState: cannot normalize");
  amplitudes /= n;
  return from_amplitudes(std::move(amplitudes));
}

QuantumState QuantumState::basis(int num_sites, std::uint64_t index) {
  if (num_sites < 0 || num_sites > kMaxSites) throw InstanceTooLarge("QuantumState::basis: too many sites");
  const Eigen::Index dim = Eigen::Index{1} << num_sites;
  if (static_cast<Eigen::Index>(index) >= dim) throw std::out_of_range("QuantumState::basis: index");
  ComplexVector v = ComplexVector::Zero(dim);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return QuantumState(std::move(v));
}

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
  ComplexVector out = kron(a.amplitudes(), b.amplitudes());
  return QuantumState::from_amplitudes(std::move(out), 1e-9);
}

void fix_global_phase(Eigen::Ref<ComplexVector> v) {
  if (v.size() == 0) return;
  const double largest = v.cwiseAbs().maxCoeff();
  if (largest == 0.0) return;
  // First index within round-off of the maximum, so near-ties resolve stably.
  Eigen::Index pick = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= largest * (1.0 - 1e-9)) {
      pick = i;
      break;
    }
  }
  const double magnitude = std::abs(v(pick));
  v *= std::conj(v(pick)) / magnitude;
  v(pick) = magnitude;
}

EigenSystem hermitian_eig(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw std::invalid_argument("hermitian_eig: matrix must be square");
  if (h.rows() > kMaxDimension) throw InstanceTooLarge("hermitian_eig: dimension exceeds dense limit");
  if (!h.allFinite()) throw std::invalid_argument("hermitian_eig: non-finite entries");
  const double defect = hermiticity_defect(h);
  if (defect > kHermitianTolerance * std::max(1.0, max_abs(h))) {
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  const Eigen::Index n = sym.rows();

  struct Pair {
    double value;
    Eigen::Index block, column;
  };
  std::vector<Pair> order;
  order.reserve(static_cast<size_t>(n));
  ComplexMatrix vectors = ComplexMatrix::Zero(n, n);
  std::vector<std::pair<std::vector<Eigen::Index>, ComplexMatrix>> solved;

  const auto blocks = exact_blocks(sym);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& idx = blocks[b];
    const auto m = static_cast<Eigen::Index>(idx.size());
    ComplexMatrix sub(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = sym(idx[i], idx[j]);
    RealVector w;
    eig_block(sub, w);
    for (Eigen::Index k = 0; k < m; ++k) order.push_back({w(k), static_cast<Eigen::Index>(b), k});
    solved.emplace_back(idx, std::move(sub));
  }
  std::stable_sort(order.begin(), order.end(), [](const Pair& a, const Pair& b) { return a.value < b.value; });

  EigenSystem out;
  out.eigenvalues.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& p = order[static_cast<size_t>(k)];
    out.eigenvalues(k) = p.value;
    const auto& [idx, sub] = solved[static_cast<size_t>(p.block)];
    for (std::size_t i = 0; i < idx.size(); ++i) vectors(idx[i], k) = sub(static_cast<Eigen::Index>(i), p.column);
    fix_global_phase(vectors.col(k));
  }
  out.eigenvectors = std::move(vectors);
  return out;
}

QuantumState evolve(const EigenSystem& eig, const QuantumState& psi0, double t_us, PhaseConvention convention) {
  if (eig.eigenvectors.rows() != psi0.dim()) {
    throw std::invalid_argument("evolve: state dimension " + std::to_string(psi0.dim()) +
                                " does not match Hamiltonian dimension " +
                                std::to_string(eig.eigenvectors.rows()));
  }
  const double scale = phase_factor(convention) * t_us;
  ComplexVector c = eig.eigenvectors.adjoint() * psi0.amplitudes();
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -scale * eig.eigenvalues(k));
  ComplexVector out = eig.eigenvectors * c;
  return QuantumState::from_amplitudes(std::move(out), 1e-9);
}

}  // namespace holeqst
