#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcert/hermitian.hpp"
#include "qcert/rng.hpp"
#include "qcert/states.hpp"
#include "qcert/tolerances.hpp"

namespace qcert {

// ---------------------------------------------------------------------------
// POVMs and outcome distributions. Outcome labels are 1-based.
// ---------------------------------------------------------------------------

struct Povm {
  int dim = 0;
  std::vector<ComplexMatrix> effects;
  int outcomes() const { return static_cast<int>(effects.size()); }
};

struct PovmReport {
  bool valid = true;
  std::string error;
};

inline PovmReport check_povm(const std::vector<ComplexMatrix>& effects) {
  if (effects.empty()) return {false, "povm: needs at least one effect"};
  const Eigen::Index dim = effects.front().rows();
  if (dim == 0) return {false, "povm: effects must be non-empty matrices"};
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (std::size_t x = 0; x < effects.size(); ++x) {
    const ComplexMatrix& m = effects[x];
    if (m.rows() != dim || m.cols() != dim)
      return {false, "povm: effect " + std::to_string(x + 1) + " has mismatched dimensions"};
    if (!is_hermitian(m))
      return {false, "povm: effect " + std::to_string(x + 1) + " is not Hermitian"};
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
    if (solver.eigenvalues().minCoeff() < tol::kPsdFloor)
      return {false, "povm: effect " + std::to_string(x + 1) + " violates positive semidefiniteness"};
    sum += m;
  }
  const double completeness = (sum - ComplexMatrix::Identity(dim, dim)).norm();
  if (completeness > tol::kCompleteness)
    return {false, "povm: effects violate completeness, ||sum - I|| = " + std::to_string(completeness)};
  return {};
}

inline Povm make_povm(std::vector<ComplexMatrix> effects) {
  const PovmReport report = check_povm(effects);
  if (!report.valid) throw std::invalid_argument(report.error);
  return {static_cast<int>(effects.front().rows()), std::move(effects)};
}

inline Povm canonical_basis_povm(int dim) {
  std::vector<ComplexMatrix> effects;
  effects.reserve(dim);
  for (int x = 0; x < dim; ++x) {
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    e(x, x) = 1.0;
    effects.push_back(std::move(e));
  }
  return {dim, std::move(effects)};
}

/// Random POVM: k random PSD blocks A_x A_x^dag whitened by S^{-1/2}.
inline Povm random_povm(int dim, int k, Rng& rng) {
  if (dim < 1 || k < 1) throw std::invalid_argument("random_povm: dim and k must be positive");
  std::vector<ComplexMatrix> raw;
  raw.reserve(k);
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  for (int x = 0; x < k; ++x) {
    ComplexMatrix a(dim, dim);
    for (int j = 0; j < dim; ++j)
      for (int i = 0; i < dim; ++i) a(i, j) = rng.complex_gaussian();
    ComplexMatrix block = a * a.adjoint();
    total += block;
    raw.push_back(std::move(block));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(total));
  const ComplexMatrix whiten = solver.operatorInverseSqrt();
  std::vector<ComplexMatrix> effects;
  effects.reserve(k);
  for (ComplexMatrix& block : raw) effects.push_back(hermitian_part(whiten * block * whiten));
  return make_povm(std::move(effects));
}

struct OutcomeDistribution {
  std::vector<double> probs;
  int outcomes() const { return static_cast<int>(probs.size()); }
  double l2_norm() const {
    double s = 0.0;
    for (double p : probs) s += p * p;
    return std::sqrt(s);
  }
};

/// Born's rule p(x) = Tr[rho M_x]; tiny negatives clipped then renormalized.
inline OutcomeDistribution born_distribution(const DensityMatrix& rho, const Povm& povm) {
  if (rho.dim != povm.dim) throw std::invalid_argument("born_distribution: dimension mismatch");
  std::vector<double> probs(povm.effects.size());
  double total = 0.0;
  for (std::size_t x = 0; x < povm.effects.size(); ++x) {
    double p = hs_inner(povm.effects[x], rho.matrix).real();
    if (p < 0.0) {
      if (p < tol::kProbabilityClip)
        throw std::runtime_error("born_distribution: probability " + std::to_string(p) +
                                 " below the clipping tolerance");
      p = 0.0;
    }
    probs[x] = p;
    total += p;
  }
  if (total <= 0.0) throw std::runtime_error("born_distribution: degenerate distribution");
  for (double& p : probs) p /= total;
  return {std::move(probs)};
}

/// Reference law u(x) = Tr[M_x]/d of the maximally mixed state.
inline OutcomeDistribution uniform_reference(const Povm& povm) {
  return born_distribution(maximally_mixed(povm.dim), povm);
}

// ---------------------------------------------------------------------------
// Pauli observables. sigma_Y is [[0, i], [-i, 0]] here.
// ---------------------------------------------------------------------------

inline ComplexMatrix pauli_sigma(int which) {
  ComplexMatrix m(2, 2);
  const std::complex<double> i(0.0, 1.0);
  switch (which) {
    case 0: m << 1, 0, 0, 1; break;            // I
    case 1: m << 0, 1, 1, 0; break;            // X
    case 2: m << 0, i, -i, 0; break;           // Y
    case 3: m << 1, 0, 0, -1; break;           // Z
    default: throw std::invalid_argument("pauli_sigma: index must be 0..3");
  }
  return m;
}

/// All 4^N - 1 non-identity tensor products, ordered by base-4 digit strings
/// (most significant digit = first qubit).
inline std::vector<ComplexMatrix> pauli_set(int qubits) {
  if (qubits < 1) throw std::invalid_argument("pauli_set: qubits must be >= 1");
  const long count = 1L << (2 * qubits);  // 4^N
  std::vector<ComplexMatrix> out;
  out.reserve(count - 1);
  for (long v = 1; v < count; ++v) {
    ComplexMatrix p = ComplexMatrix::Identity(1, 1);
    for (int q = qubits - 1; q >= 0; --q) {
      const int digit = static_cast<int>((v >> (2 * q)) & 3);
      p = kron(p, pauli_sigma(digit));
    }
    out.push_back(std::move(p));
  }
  return out;
}

/// Two-outcome POVM {(I-P)/2, (I+P)/2}; label 2 is the "+1" outcome.
inline Povm pauli_povm(const ComplexMatrix& p) {
  const Eigen::Index dim = p.rows();
  const ComplexMatrix identity = ComplexMatrix::Identity(dim, dim);
  return {static_cast<int>(dim), {0.5 * (identity - p), 0.5 * (identity + p)}};
}

/// Per observable P, the probability (1 + Tr[rho P])/2 of the "+1" outcome.
inline std::vector<double> pauli_probability_vector(const DensityMatrix& rho) {
  const int qubits = log2_exact(rho.dim);
  const std::vector<ComplexMatrix> paulis = pauli_set(qubits);
  std::vector<double> probs;
  probs.reserve(paulis.size());
  for (const ComplexMatrix& p : paulis)
    probs.push_back(0.5 * (1.0 + hs_inner(p, rho.matrix).real()));
  return probs;
}

// ---------------------------------------------------------------------------
// Coarse projector POVM from a unitary: k projectors of rank r = d/k onto
// consecutive column blocks of U.
// ---------------------------------------------------------------------------

inline Povm haar_projector_povm(const ComplexMatrix& u, int k) {
  const int dim = static_cast<int>(u.rows());
  if (u.rows() != u.cols()) throw std::invalid_argument("haar_projector_povm: unitary must be square");
  if (!is_power_of_two(k) || dim % k != 0)
    throw std::invalid_argument("haar_projector_povm: k must be a power of two dividing d");
  const int rank = dim / k;
  std::vector<ComplexMatrix> effects;
  effects.reserve(k);
  for (int x = 0; x < k; ++x) {
    const ComplexMatrix block = u.middleCols(x * rank, rank);
    effects.push_back(block * block.adjoint());
  }
  return {dim, std::move(effects)};
}

// ---------------------------------------------------------------------------
// Measurement schemes. A fixed scheme is fully determined before any oracle
// access; it stores POVMs with repeat counts, applied in declaration order.
// ---------------------------------------------------------------------------

struct FixedScheme {
  std::vector<Povm> povms;
  std::vector<std::size_t> counts;

  std::size_t total_copies() const {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  }
  int dim() const { return povms.empty() ? 0 : povms.front().dim; }
  std::size_t entries() const { return povms.size(); }
  int max_outcomes() const {
    int k = 0;
    for (const Povm& p : povms) k = std::max(k, p.outcomes());
    return k;
  }
};

inline FixedScheme make_fixed_scheme(std::vector<Povm> povms, std::vector<std::size_t> counts) {
  if (povms.empty() || povms.size() != counts.size())
    throw std::invalid_argument("fixed scheme: povms and counts must be non-empty and aligned");
  const int dim = povms.front().dim;
  for (const Povm& p : povms)
    if (p.dim != dim) throw std::invalid_argument("fixed scheme: all POVMs must share one dimension");
  return {std::move(povms), std::move(counts)};
}

inline FixedScheme repeated_scheme(Povm povm, std::size_t n) {
  return make_fixed_scheme({std::move(povm)}, {n});
}

/// Cycle through the given POVMs until n copies are covered.
inline FixedScheme cycling_scheme(const std::vector<Povm>& povms, std::size_t n) {
  if (povms.empty()) throw std::invalid_argument("cycling_scheme: needs at least one POVM");
  std::vector<Povm> seq;
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < n; ++i) {
    seq.push_back(povms[i % povms.size()]);
    counts.push_back(1);
  }
  return make_fixed_scheme(std::move(seq), std::move(counts));
}

/// Randomized non-adaptive scheme: a deterministic plan (seed, index) -> POVM.
struct RandomizedScheme {
  int dim = 0;
  std::function<Povm(std::uint64_t seed, std::size_t index)> plan;
};

// ---------------------------------------------------------------------------
// Copy oracle: budgeted access to copies of a hidden state, one outcome per
// copy. Single consumer; concurrent trials each own their oracle.
// ---------------------------------------------------------------------------

class CopyOracle {
 public:
  CopyOracle(DensityMatrix rho, std::size_t budget, Rng rng)
      : rho_(std::move(rho)), remaining_(budget), rng_(std::move(rng)) {}

  std::size_t remaining() const { return remaining_; }
  std::size_t consumed() const { return consumed_; }
  int dim() const { return rho_.dim; }

  /// Measure one copy; returns a 1-based outcome label.
  int measure(const Povm& povm) {
    const std::vector<double> cdf = cumulative(born_distribution(rho_, povm).probs);
    return draw(cdf);
  }

  // largest in-memory outcome batch; formula budgets beyond this (paper-mode
  // constants at small eps) must be run with an explicit n instead
  static constexpr std::size_t kMaxBatch = std::size_t{1} << 31;

  /// Measure m copies with the same POVM (Born distribution computed once).
  std::vector<int> measure_many(const Povm& povm, std::size_t m) {
    if (m > kMaxBatch)
      throw std::runtime_error("copy oracle: batch of " + std::to_string(m) +
                               " outcomes exceeds the in-memory limit");
    if (m > remaining_)
      throw std::runtime_error("copy oracle: budget exhausted (requested " + std::to_string(m) +
                               ", remaining " + std::to_string(remaining_) + ")");
    const std::vector<double> cdf = cumulative(born_distribution(rho_, povm).probs);
    std::vector<int> outcomes(m);
    for (std::size_t i = 0; i < m; ++i) outcomes[i] = draw_unchecked(cdf);
    remaining_ -= m;
    consumed_ += m;
    return outcomes;
  }

 private:
  int draw(const std::vector<double>& cdf) {
    if (remaining_ == 0) throw std::runtime_error("copy oracle: budget exhausted");
    --remaining_;
    ++consumed_;
    return draw_unchecked(cdf);
  }
  int draw_unchecked(const std::vector<double>& cdf) {
    return static_cast<int>(draw_from_cdf(cdf, rng_)) + 1;
  }

  DensityMatrix rho_;
  std::size_t remaining_ = 0;
  std::size_t consumed_ = 0;
  Rng rng_;
};

}  // namespace qcert
