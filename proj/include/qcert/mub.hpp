#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qcert/hermitian.hpp"
#include "qcert/measurement.hpp"
#include "qcert/states.hpp"

namespace qcert {

struct MubFamily {
  int dim = 0;
  std::vector<ComplexMatrix> bases;  // d+1 unitaries; columns are the basis vectors
};

namespace detail {

// Symplectic encoding of Pauli labels: digit -> (x-bit, z-bit), packed as
// (a << N) | b. Products of Paulis correspond to XOR of keys, and two Paulis
// commute iff the symplectic form <a, b'> + <a', b> vanishes mod 2.
struct PauliSymplectic {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
};

inline PauliSymplectic pauli_key(long v, int qubits) {
  PauliSymplectic key;
  for (int q = qubits - 1; q >= 0; --q) {
    const int digit = static_cast<int>((v >> (2 * q)) & 3);
    key.a <<= 1;
    key.b <<= 1;
    if (digit == 1 || digit == 2) key.a |= 1;  // X or Y
    if (digit == 2 || digit == 3) key.b |= 1;  // Y or Z
  }
  return key;
}

inline bool pauli_commute(const PauliSymplectic& u, const PauliSymplectic& v) {
  const int form = std::popcount(u.a & v.b) + std::popcount(u.b & v.a);
  return (form & 1) == 0;
}

inline std::uint32_t packed(const PauliSymplectic& k, int qubits) {
  return (k.a << qubits) | k.b;
}

// Partition the 4^N - 1 nonzero symplectic vectors into d+1 Lagrangian
// classes (maximal pairwise-commuting subgroups) by backtracking. Each class
// is returned as its list of packed keys plus N generators.
struct CommutingClass {
  std::vector<std::uint32_t> members;
  std::vector<std::uint32_t> generators;
};

inline bool spread_search(std::vector<bool>& used, int qubits,
                          std::vector<CommutingClass>& out) {
  const std::uint32_t count = 1u << (2 * qubits);
  std::uint32_t seed = 0;
  for (std::uint32_t v = 1; v < count; ++v) {
    if (!used[v]) {
      seed = v;
      break;
    }
  }
  if (seed == 0) return true;  // everything covered

  auto commute_packed = [qubits](std::uint32_t u, std::uint32_t v) {
    const std::uint32_t mask = (1u << qubits) - 1;
    PauliSymplectic ku{u >> qubits, u & mask};
    PauliSymplectic kv{v >> qubits, v & mask};
    return pauli_commute(ku, kv);
  };

  std::vector<std::uint32_t> generators{seed};
  std::vector<std::uint32_t> span{seed};

  // DFS over additional generators extending the isotropic subspace.
  std::function<bool()> extend = [&]() -> bool {
    if (static_cast<int>(generators.size()) == qubits) {
      for (std::uint32_t m : span) used[m] = true;
      out.push_back({span, generators});
      if (spread_search(used, qubits, out)) return true;
      for (std::uint32_t m : span) used[m] = false;
      out.pop_back();
      return false;
    }
    for (std::uint32_t w = seed + 1; w < count; ++w) {
      if (used[w]) continue;
      bool ok = true;
      for (std::uint32_t m : span) {
        if (m == w) { ok = false; break; }          // already in span
        if (!commute_packed(m, w)) { ok = false; break; }
      }
      if (!ok) continue;
      const std::size_t old_size = span.size();
      for (std::size_t i = 0; i < old_size; ++i) {
        const std::uint32_t e = span[i] ^ w;
        if (used[e]) { ok = false; break; }
        span.push_back(e);
      }
      if (ok) {
        span.push_back(w);
        // new elements must be unused; pairwise commutation follows from
        // bilinearity of the symplectic form
        bool fresh = true;
        for (std::size_t i = old_size; i < span.size(); ++i)
          if (used[span[i]]) { fresh = false; break; }
        if (fresh) {
          generators.push_back(w);
          if (extend()) return true;
          generators.pop_back();
        }
      }
      span.resize(old_size);
    }
    return false;
  };
  return extend();
}

}  // namespace detail

// Maximal MUB for d = 2^N: the Pauli observables are partitioned into d+1
// commuting classes of d-1 (a symplectic spread), and each class is jointly
// diagonalized. H = sum_j 3^j P_{g_j} over the class generators has d distinct
// eigenvalues (balanced-ternary sums), so one eigendecomposition per class
// yields the common eigenbasis.
inline MubFamily build_mub(int qubits) {
  if (qubits < 1 || qubits > 3)
    throw std::invalid_argument("build_mub: supported qubit counts are 1, 2, 3");
  const int dim = 1 << qubits;
  const long pauli_count = (1L << (2 * qubits)) - 1;

  std::vector<ComplexMatrix> paulis = pauli_set(qubits);
  std::vector<ComplexMatrix> by_key(1u << (2 * qubits));
  for (long v = 1; v <= pauli_count; ++v)
    by_key[detail::packed(detail::pauli_key(v, qubits), qubits)] = paulis[v - 1];

  std::vector<bool> used(1u << (2 * qubits), false);
  std::vector<detail::CommutingClass> classes;
  if (!detail::spread_search(used, qubits, classes) ||
      static_cast<int>(classes.size()) != dim + 1)
    throw std::runtime_error("build_mub: spread search failed");

  MubFamily family{dim, {}};
  family.bases.reserve(dim + 1);
  for (const detail::CommutingClass& cls : classes) {
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    double weight = 1.0;
    for (std::uint32_t g : cls.generators) {
      h += weight * by_key[g];
      weight *= 3.0;
    }
    family.bases.push_back(eig_hermitian(h).eigenvectors);
  }
  return family;
}

/// HS distance between the averaged two-fold projector and the Haar value
/// (I + SWAP)/(d(d+1)). Zero (numerically) iff the vectors form a 2-design.
inline double two_design_check(const std::vector<ComplexVector>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("two_design_check: empty vector set");
  const int dim = static_cast<int>(vectors.front().size());
  const int dd = dim * dim;
  ComplexMatrix avg = ComplexMatrix::Zero(dd, dd);
  for (const ComplexVector& psi : vectors) {
    if (psi.size() != dim) throw std::invalid_argument("two_design_check: mixed dimensions");
    if (std::abs(psi.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("two_design_check: vectors must be normalized");
    const ComplexMatrix proj = psi * psi.adjoint();
    avg += kron(proj, proj);
  }
  avg /= static_cast<double>(vectors.size());

  ComplexMatrix target = ComplexMatrix::Identity(dd, dd);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) target(i * dim + j, j * dim + i) += 1.0;
  target /= static_cast<double>(dim) * (dim + 1);
  return (avg - target).norm();
}

inline std::vector<ComplexVector> mub_vectors(const MubFamily& family) {
  std::vector<ComplexVector> out;
  out.reserve(static_cast<std::size_t>(family.dim) * family.bases.size());
  for (const ComplexMatrix& basis : family.bases)
    for (int x = 0; x < family.dim; ++x) out.push_back(basis.col(x));
  return out;
}

/// Single POVM treating all d+1 bases uniformly: d(d+1) effects
/// |psi_x^l><psi_x^l| / (d+1), ordered basis-major.
inline Povm mub_povm(const MubFamily& family) {
  std::vector<ComplexMatrix> effects;
  effects.reserve(static_cast<std::size_t>(family.dim) * family.bases.size());
  const double scale = 1.0 / static_cast<double>(family.bases.size());
  for (const ComplexMatrix& basis : family.bases)
    for (int x = 0; x < family.dim; ++x) {
      const ComplexVector psi = basis.col(x);
      effects.push_back(scale * (psi * psi.adjoint()));
    }
  return {family.dim, std::move(effects)};
}

/// Rank-1 basis measurement for one MUB index.
inline Povm mub_basis_povm(const MubFamily& family, int basis_index) {
  if (basis_index < 0 || basis_index >= static_cast<int>(family.bases.size()))
    throw std::invalid_argument("mub_basis_povm: basis index out of range");
  return haar_projector_povm(family.bases[basis_index], family.dim);
}

}  // namespace qcert
