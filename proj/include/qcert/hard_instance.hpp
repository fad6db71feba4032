#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qcert/hermitian.hpp"
#include "qcert/mic.hpp"
#include "qcert/rng.hpp"
#include "qcert/states.hpp"

namespace qcert {

// Perturbation construction around the maximally mixed state: independent
// sign flips along ell orthonormal trace-0 directions,
//   Delta_z = (c eps / sqrt(d)) ell^{-1/2} sum_i z_i V_i,
// clipped by a_z = min{1, 1/(d ||Delta_z||_inf)} so sigma_z = I/d + clipped
// perturbation is always a valid state.
struct HardInstance {
  int dim = 0;
  std::size_t ell = 0;
  double eps = 0.0;
  double c = 0.0;
  std::vector<int> signs;       // entries +-1
  ComplexMatrix delta_raw;
  ComplexMatrix delta_clipped;
  double clip_factor = 1.0;
  DensityMatrix sigma;
};

/// Normalized Pauli basis {P/sqrt(d)} with I/sqrt(d) last: the default
/// measurement-independent orthonormal basis of Herm(d).
inline std::vector<ComplexMatrix> normalized_pauli_basis(int qubits) {
  const int dim = 1 << qubits;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<ComplexMatrix> basis;
  for (ComplexMatrix& p : pauli_set(qubits)) basis.push_back(scale * p);
  basis.push_back(scale * ComplexMatrix::Identity(dim, dim));
  return basis;
}

namespace detail {
inline void require_perturbation_basis(const std::vector<ComplexMatrix>& basis, int dim) {
  const std::size_t dd = static_cast<std::size_t>(dim) * dim;
  if (basis.size() != dd)
    throw std::invalid_argument("perturbation basis must have d^2 elements");
  const ComplexMatrix unit = ComplexMatrix::Identity(dim, dim) / std::sqrt(static_cast<double>(dim));
  if ((basis.back() - unit).norm() > 1e-8)
    throw std::invalid_argument("perturbation basis must end with I/sqrt(d)");
  if (dim <= 16) {  // Gram check is cubic in d^2; larger d uses trusted bases
    ComplexMatrix stacked(dd, dd);
    for (std::size_t i = 0; i < dd; ++i) {
      if (!is_hermitian(basis[i], 1e-8))
        throw std::invalid_argument("perturbation basis element is not Hermitian");
      stacked.col(i) = vectorize(basis[i]);
    }
    const ComplexMatrix gram = stacked.adjoint() * stacked;
    if ((gram - ComplexMatrix::Identity(dd, dd)).cwiseAbs().maxCoeff() > 1e-8)
      throw std::invalid_argument("perturbation basis is not orthonormal");
  }
}
}  // namespace detail

/// Deterministic core: build the instance for a given sign vector.
inline HardInstance make_perturbation(const std::vector<ComplexMatrix>& basis, std::size_t ell,
                                      double eps, double c, std::vector<int> signs) {
  if (basis.empty()) throw std::invalid_argument("make_perturbation: empty basis");
  const int dim = static_cast<int>(basis.front().rows());
  detail::require_perturbation_basis(basis, dim);
  const std::size_t dd = static_cast<std::size_t>(dim) * dim;
  if (ell < dd / 2 || ell > dd - 1)
    throw std::invalid_argument("make_perturbation: ell must lie in [d^2/2, d^2-1]");
  if (eps < 0.0 || c <= 0.0) throw std::invalid_argument("make_perturbation: need eps >= 0, c > 0");
  if (signs.size() != ell) throw std::invalid_argument("make_perturbation: need ell signs");

  HardInstance inst;
  inst.dim = dim;
  inst.ell = ell;
  inst.eps = eps;
  inst.c = c;
  inst.signs = std::move(signs);

  const double coeff = c * eps / std::sqrt(static_cast<double>(dim) * static_cast<double>(ell));
  ComplexMatrix delta = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < ell; ++i) delta += static_cast<double>(inst.signs[i]) * basis[i];
  delta *= coeff;
  inst.delta_raw = hermitian_part(delta);

  const double opnorm = op_norm(inst.delta_raw);
  inst.clip_factor = (dim * opnorm > 1.0) ? 1.0 / (dim * opnorm) : 1.0;
  inst.delta_clipped = inst.clip_factor * inst.delta_raw;
  inst.sigma = make_density(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim) +
                            inst.delta_clipped);
  return inst;
}

inline HardInstance sample_perturbation(const std::vector<ComplexMatrix>& basis, std::size_t ell,
                                        double eps, double c, Rng& rng) {
  std::vector<int> signs(ell);
  for (std::size_t i = 0; i < ell; ++i) signs[i] = rng.sign();
  return make_perturbation(basis, ell, eps, c, std::move(signs));
}

/// Eigenbasis of the scheme's average MIC, traceless directions first in
/// ascending eigenvalue order: perturbing along V_1..V_ell puts the instance
/// where the scheme is least informative.
inline MicEigenbasis adversarial_basis(const FixedScheme& scheme) {
  return mic_eigenbasis(average_mic(scheme));
}

inline HardInstance sample_perturbation(const MicEigenbasis& basis, std::size_t ell, double eps,
                                        double c, Rng& rng) {
  return sample_perturbation(basis.vectors, ell, eps, c, rng);
}

struct HardInstanceReport {
  bool sigma_valid = false;     // PSD + unit trace (holds by construction)
  bool far = false;             // ||clipped Delta||_1 >= eps
  bool raw_opnorm_ok = false;   // ||raw Delta||_inf <= 1/d, i.e. clip not engaged
  double delta_trace_norm = 0.0;
  double raw_op_norm = 0.0;
  double clip_factor = 1.0;
};

inline HardInstanceReport validate_hard_instance(const HardInstance& inst, double eps) {
  HardInstanceReport report;
  report.delta_trace_norm = trace_norm(inst.delta_clipped);
  report.raw_op_norm = op_norm(inst.delta_raw);
  report.clip_factor = inst.clip_factor;
  const double trace_gap = std::abs(inst.sigma.matrix.trace() - std::complex<double>(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(inst.sigma.matrix);
  report.sigma_valid = trace_gap <= tol::kTraceOne && solver.eigenvalues().minCoeff() >= tol::kPsdFloor;
  report.far = report.delta_trace_norm >= eps;
  report.raw_opnorm_ok = report.raw_op_norm <= 1.0 / inst.dim + 1e-10;
  return report;
}

// ---------------------------------------------------------------------------
// Operator-norm concentration: W = sum_{i<=ell} z_i V_i over an orthonormal
// basis has ||W||_inf = O(sqrt(d)) with probability 1 - 2 exp(-d); kappa_1 = 10.
// ---------------------------------------------------------------------------

struct ConcentrationReport {
  int dim = 0;
  std::size_t ell = 0;
  std::size_t trials = 0;
  double kappa = 10.0;
  double max_ratio = 0.0;      // max over trials of ||W||_inf / sqrt(d)
  std::size_t exceedances = 0; // trials with ratio > kappa
  double tail_fraction = 0.0;
};

namespace detail {
// Normalized Pauli basis element applied without materializing the matrix:
// P_{a,b} = i^{a.b} X^a Z^b has entries <x ^ a| P |x> = i^{a.b} (-1)^{b.x}.
// Sign conventions differ from pauli_set on Y-heavy strings, which is
// irrelevant under symmetric signs.
inline void add_symplectic_pauli(ComplexMatrix& w, std::uint32_t a, std::uint32_t b, double weight) {
  const int dim = static_cast<int>(w.rows());
  static const std::complex<double> kPowersOfI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::complex<double> phase = kPowersOfI[std::popcount(a & b) & 3];
  for (std::uint32_t x = 0; x < static_cast<std::uint32_t>(dim); ++x) {
    const double sign = (std::popcount(b & x) & 1) ? -1.0 : 1.0;
    w(x ^ a, x) += weight * sign * phase;
  }
}
}  // namespace detail

/// Monte Carlo tail of ||W||_inf / sqrt(d) against kappa sqrt(d), using the
/// normalized Pauli basis in pauli_set order (first ell elements).
inline ConcentrationReport opnorm_concentration_experiment(int dim, std::size_t ell,
                                                           std::size_t trials, Rng& rng,
                                                           double kappa = 10.0) {
  const int qubits = log2_exact(dim);
  const std::size_t dd = static_cast<std::size_t>(dim) * dim;
  if (ell > dd) throw std::invalid_argument("opnorm_concentration_experiment: ell must be <= d^2");

  // precompute symplectic keys in pauli_set enumeration order
  std::vector<std::pair<std::uint32_t, std::uint32_t>> keys;
  keys.reserve(ell);
  for (long v = 1; static_cast<std::size_t>(v) <= ell; ++v) {
    std::uint32_t a = 0, b = 0;
    for (int q = qubits - 1; q >= 0; --q) {
      const int digit = static_cast<int>((v >> (2 * q)) & 3);
      a <<= 1;
      b <<= 1;
      if (digit == 1 || digit == 2) a |= 1;
      if (digit == 2 || digit == 3) b |= 1;
    }
    keys.emplace_back(a, b);
  }

  ConcentrationReport report;
  report.dim = dim;
  report.ell = ell;
  report.trials = trials;
  report.kappa = kappa;

  const double norm_scale = 1.0 / std::sqrt(static_cast<double>(dim));  // V_i = P_i / sqrt(d)
  const double sqrt_d = std::sqrt(static_cast<double>(dim));
  for (std::size_t t = 0; t < trials; ++t) {
    ComplexMatrix w = ComplexMatrix::Zero(dim, dim);
    for (const auto& [a, b] : keys)
      detail::add_symplectic_pauli(w, a, b, rng.sign() * norm_scale);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(w));
    const double ratio = solver.eigenvalues().cwiseAbs().maxCoeff() / sqrt_d;
    report.max_ratio = std::max(report.max_ratio, ratio);
    if (ratio > kappa) ++report.exceedances;
  }
  report.tail_fraction = trials ? static_cast<double>(report.exceedances) / trials : 0.0;
  return report;
}

/// Same experiment over an explicit orthonormal basis (first ell elements).
inline ConcentrationReport opnorm_concentration_experiment(const std::vector<ComplexMatrix>& basis,
                                                           std::size_t ell, std::size_t trials,
                                                           Rng& rng, double kappa = 10.0) {
  if (basis.empty() || ell > basis.size())
    throw std::invalid_argument("opnorm_concentration_experiment: ell exceeds basis size");
  const int dim = static_cast<int>(basis.front().rows());
  ConcentrationReport report;
  report.dim = dim;
  report.ell = ell;
  report.trials = trials;
  report.kappa = kappa;
  const double sqrt_d = std::sqrt(static_cast<double>(dim));
  for (std::size_t t = 0; t < trials; ++t) {
    ComplexMatrix w = ComplexMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < ell; ++i) w += static_cast<double>(rng.sign()) * basis[i];
    const double ratio = op_norm(w) / sqrt_d;
    report.max_ratio = std::max(report.max_ratio, ratio);
    if (ratio > kappa) ++report.exceedances;
  }
  report.tail_fraction = trials ? static_cast<double>(report.exceedances) / trials : 0.0;
  return report;
}

// ---------------------------------------------------------------------------
// Classical analogue: the paired +-(c eps)/d perturbation of the uniform
// distribution over [d].
// ---------------------------------------------------------------------------

inline std::vector<double> paninski_instance(int d, double eps, const std::vector<int>& signs,
                                             double c) {
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("paninski_instance: d must be even");
  if (signs.size() != static_cast<std::size_t>(d / 2))
    throw std::invalid_argument("paninski_instance: need d/2 signs");
  if (c * eps > 1.0) throw std::invalid_argument("paninski_instance: c*eps must be <= 1");
  std::vector<double> p(d);
  for (int t = 0; t < d / 2; ++t) {
    const double bump = c * eps * signs[t];
    p[2 * t] = (1.0 + bump) / d;
    p[2 * t + 1] = (1.0 - bump) / d;
  }
  return p;
}

}  // namespace qcert
