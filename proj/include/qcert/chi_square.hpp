#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qcert/hard_instance.hpp"
#include "qcert/hermitian.hpp"
#include "qcert/measurement.hpp"
#include "qcert/mic.hpp"
#include "qcert/states.hpp"

namespace qcert {

inline constexpr std::size_t kEnumerationCap = 1'000'000;  // k^n table entries
inline constexpr std::size_t kSignEnumerationCap = 256;    // 2^ell instances

// Full joint law of a fixed scheme's outcome string, stored as a flat table
// over [k]^n (row-major, copy 1 most significant).
struct JointOutcomeLaw {
  std::size_t copies = 0;
  int outcomes = 0;  // per-copy alphabet size (max over the scheme)
  std::vector<double> probs;
};

inline JointOutcomeLaw enumerate_outcome_law(const FixedScheme& scheme, const DensityMatrix& rho) {
  const std::size_t n = scheme.total_copies();
  const int k = scheme.max_outcomes();
  if (n == 0 || k == 0) throw std::invalid_argument("enumerate_outcome_law: empty scheme");

  double table_size = 1.0;
  for (std::size_t i = 0; i < n; ++i) table_size *= k;
  if (table_size > static_cast<double>(kEnumerationCap))
    throw std::invalid_argument("enumerate_outcome_law: k^n exceeds the enumeration cap");

  // per-copy Born distributions, padded to k outcomes
  std::vector<std::vector<double>> per_copy;
  per_copy.reserve(n);
  for (std::size_t j = 0; j < scheme.povms.size(); ++j) {
    std::vector<double> p = born_distribution(rho, scheme.povms[j]).probs;
    p.resize(k, 0.0);
    for (std::size_t r = 0; r < scheme.counts[j]; ++r) per_copy.push_back(p);
  }

  JointOutcomeLaw law{n, k, std::vector<double>(static_cast<std::size_t>(table_size), 0.0)};
  const std::size_t total = law.probs.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    double p = 1.0;
    std::size_t rest = idx;
    for (std::size_t i = n; i-- > 0;) {
      p *= per_copy[i][rest % k];
      rest /= k;
    }
    law.probs[idx] = p;
  }
  return law;
}

struct DivergenceSet {
  double tv = 0.0;
  double kl = 0.0;
  double chi_square = 0.0;
};

/// Exact TV, KL, chi-square between laws of the same shape. KL and chi-square
/// require absolute continuity (Q(x) = 0 implies P(x) = 0).
inline DivergenceSet divergences(const JointOutcomeLaw& p, const JointOutcomeLaw& q) {
  if (p.copies != q.copies || p.outcomes != q.outcomes || p.probs.size() != q.probs.size())
    throw std::invalid_argument("divergences: laws must share a support shape");
  DivergenceSet out;
  for (std::size_t i = 0; i < p.probs.size(); ++i) {
    const double pi = p.probs[i], qi = q.probs[i];
    out.tv += std::abs(pi - qi);
    if (qi <= 0.0) {
      if (pi > 1e-14) throw std::domain_error("divergences: absolute continuity violated");
      continue;
    }
    if (pi > 0.0) out.kl += pi * std::log(pi / qi);
    const double gap = pi - qi;
    out.chi_square += gap * gap / qi;
  }
  out.tv *= 0.5;
  return out;
}

// ---------------------------------------------------------------------------
// The per-copy kernel H(sigma, sigma') = d vec(sigma - rho_mm)^dag C vec(sigma'
// - rho_mm), equal to sum_x (p_sigma(x) - u(x))(p_sigma'(x) - u(x)) / u(x)
// with u(x) = Tr[M_x]/d.
// ---------------------------------------------------------------------------

inline double mic_kernel(const DensityMatrix& sigma, const DensityMatrix& sigma_prime,
                         const MicMatrix& mic) {
  if (sigma.dim != mic.dim || sigma_prime.dim != mic.dim)
    throw std::invalid_argument("mic_kernel: dimension mismatch");
  const DensityMatrix mm = maximally_mixed(mic.dim);
  const ComplexVector left = vectorize(sigma.matrix - mm.matrix);
  const ComplexVector right = vectorize(sigma_prime.matrix - mm.matrix);
  return mic.dim * (left.adjoint() * (mic.matrix * right))(0).real();
}

inline double mic_kernel(const DensityMatrix& sigma, const DensityMatrix& sigma_prime,
                         const Povm& povm) {
  return mic_kernel(sigma, sigma_prime, mic_matrix(povm));
}

/// Independent route through Born distributions; outcomes with u(x) = 0 are
/// skipped when both numerator factors vanish, otherwise they are an error.
inline double mic_kernel_born(const DensityMatrix& sigma, const DensityMatrix& sigma_prime,
                              const Povm& povm) {
  const DensityMatrix mm = maximally_mixed(povm.dim);
  double total = 0.0;
  for (const ComplexMatrix& effect : povm.effects) {
    const double u = effect.trace().real() / povm.dim;
    const double a = hs_inner(effect, sigma.matrix - mm.matrix).real();
    const double b = hs_inner(effect, sigma_prime.matrix - mm.matrix).real();
    if (u <= 0.0) {
      if (std::abs(a) > 1e-14 || std::abs(b) > 1e-14)
        throw std::domain_error("mic_kernel_born: zero-mass outcome with nonzero numerator");
      continue;
    }
    total += a * b / u;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Exact chi-square identities on enumerable instances.
// ---------------------------------------------------------------------------

struct ChiSquareReport {
  double chi_square = 0.0;      // exact divergence of the mixture vs the null law
  double pollard_rhs = 0.0;     // E_{theta,theta'} prod_i (1 + H_i) - 1
  double decoupled_bound = 0.0; // E exp{n d vec^dag C-bar vec} - 1 (when computed)
  std::vector<RealMatrix> kernels;  // per scheme entry: H over instance pairs
  double pollard_gap() const {
    const double scale = std::max({1.0, std::abs(chi_square), std::abs(pollard_rhs)});
    return std::abs(chi_square - pollard_rhs) / scale;
  }
  bool bound_holds(double slack = 1e-9) const { return chi_square <= decoupled_bound + slack; }
};

using WeightedInstances = std::vector<std::pair<DensityMatrix, double>>;

/// Exact two-sided evaluation of the product-expansion identity
/// chi^2(E_theta Q_theta || P) = E_{theta,theta'} prod_i (1 + H_i) - 1.
inline ChiSquareReport pollard_check(const FixedScheme& scheme, const WeightedInstances& instances) {
  if (instances.empty()) throw std::invalid_argument("pollard_check: empty instance set");
  double weight_sum = 0.0;
  for (const auto& [sigma, w] : instances) weight_sum += w;
  if (std::abs(weight_sum - 1.0) > 1e-12)
    throw std::invalid_argument("pollard_check: weights must sum to 1");

  const DensityMatrix mm = maximally_mixed(scheme.dim());
  const JointOutcomeLaw null_law = enumerate_outcome_law(scheme, mm);

  // exact mixture law
  JointOutcomeLaw mixture{null_law.copies, null_law.outcomes,
                          std::vector<double>(null_law.probs.size(), 0.0)};
  for (const auto& [sigma, w] : instances) {
    const JointOutcomeLaw law = enumerate_outcome_law(scheme, sigma);
    for (std::size_t i = 0; i < law.probs.size(); ++i) mixture.probs[i] += w * law.probs[i];
  }

  ChiSquareReport report;
  report.chi_square = divergences(mixture, null_law).chi_square;

  // kernels per distinct POVM, then the product expansion over copies
  const std::size_t count = instances.size();
  report.kernels.reserve(scheme.povms.size());
  for (const Povm& povm : scheme.povms) {
    const MicMatrix mic = mic_matrix(povm);
    RealMatrix h(count, count);
    for (std::size_t a = 0; a < count; ++a)
      for (std::size_t b = 0; b < count; ++b)
        h(a, b) = mic_kernel(instances[a].first, instances[b].first, mic);
    report.kernels.push_back(std::move(h));
  }
  double rhs = 0.0;
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = 0; b < count; ++b) {
      double prod = 1.0;
      for (std::size_t j = 0; j < scheme.povms.size(); ++j)
        prod *= std::pow(1.0 + report.kernels[j](a, b), static_cast<double>(scheme.counts[j]));
      rhs += instances[a].second * instances[b].second * prod;
    }
  report.pollard_rhs = rhs - 1.0;
  return report;
}

/// All sign vectors of the perturbation family, uniformly weighted.
inline WeightedInstances enumerate_sign_instances(const std::vector<ComplexMatrix>& basis,
                                                  std::size_t ell, double eps, double c) {
  if (ell >= 64 || (std::size_t{1} << ell) > kSignEnumerationCap)
    throw std::invalid_argument("enumerate_sign_instances: 2^ell exceeds the enumeration cap");
  const std::size_t total = std::size_t{1} << ell;
  WeightedInstances instances;
  instances.reserve(total);
  const double w = 1.0 / static_cast<double>(total);
  for (std::size_t bits = 0; bits < total; ++bits) {
    std::vector<int> signs(ell);
    for (std::size_t i = 0; i < ell; ++i) signs[i] = (bits >> i) & 1 ? +1 : -1;
    instances.emplace_back(make_perturbation(basis, ell, eps, c, std::move(signs)).sigma, w);
  }
  return instances;
}

/// Exact LHS (chi-square of the sign mixture) against the decoupled bound
/// E_{z,z'} exp{n d vec(Delta_z)^dag C-bar vec(Delta_z')} - 1.
inline ChiSquareReport decoupled_bound_check(const FixedScheme& scheme,
                                             const std::vector<ComplexMatrix>& basis,
                                             std::size_t ell, double eps, double c) {
  const WeightedInstances instances = enumerate_sign_instances(basis, ell, eps, c);
  ChiSquareReport report = pollard_check(scheme, instances);

  const MicMatrix avg = average_mic(scheme);
  const double n = static_cast<double>(scheme.total_copies());
  const std::size_t count = instances.size();
  RealMatrix pairwise(count, count);
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = 0; b < count; ++b)
      pairwise(a, b) = mic_kernel(instances[a].first, instances[b].first, avg);
  double rhs = 0.0;
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = 0; b < count; ++b)
      rhs += instances[a].second * instances[b].second * std::exp(n * pairwise(a, b));
  report.decoupled_bound = rhs - 1.0;
  return report;
}

// ---------------------------------------------------------------------------
// Max-min game demonstration: the same scheme against a measurement-
// independent basis and against the eigenbasis of its own average MIC.
// ---------------------------------------------------------------------------

struct GameValueReport {
  double chi_fixed_basis = 0.0;
  double chi_adversarial_basis = 0.0;
  double threshold = 2.0 / 25.0;
  bool fixed_clears_threshold = false;
  bool adversarial_clears_threshold = false;
};

inline GameValueReport game_value_demo(const FixedScheme& scheme, double eps, std::size_t ell,
                                       double c = 14.142135623730951 /* 10 sqrt(2) */) {
  const int dim = scheme.dim();
  const int qubits = log2_exact(dim);

  GameValueReport report;
  const std::vector<ComplexMatrix> pauli_basis = normalized_pauli_basis(qubits);
  report.chi_fixed_basis =
      pollard_check(scheme, enumerate_sign_instances(pauli_basis, ell, eps, c)).chi_square;

  const MicEigenbasis adv = adversarial_basis(scheme);
  report.chi_adversarial_basis =
      pollard_check(scheme, enumerate_sign_instances(adv.vectors, ell, eps, c)).chi_square;

  report.fixed_clears_threshold = report.chi_fixed_basis >= report.threshold;
  report.adversarial_clears_threshold = report.chi_adversarial_basis >= report.threshold;
  return report;
}

}  // namespace qcert
