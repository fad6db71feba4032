#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "qcert/haar_sampling.hpp"
#include "qcert/hermitian.hpp"
#include "qcert/measurement.hpp"
#include "qcert/rng.hpp"
#include "qcert/states.hpp"
#include "qcert/stats.hpp"

namespace qcert {

struct HaarSampleReport {
  std::size_t samples = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double oracle = 0.0;
  double z_score = 0.0;
};

namespace detail {
inline HaarSampleReport finish_report(const MeanAccumulator& acc, double oracle) {
  HaarSampleReport report;
  report.samples = acc.count();
  report.estimate = acc.mean();
  report.std_error = acc.std_error();
  report.oracle = oracle;
  const double gap = report.estimate - oracle;
  report.z_score = report.std_error > 0.0 ? gap / report.std_error : (gap == 0.0 ? 0.0 : INFINITY);
  return report;
}
}  // namespace detail

/// Monte Carlo check of E_U Tr[A U^dag B U] = Tr[A] Tr[B] / d.
inline HaarSampleReport first_moment_check(const ComplexMatrix& a, const ComplexMatrix& b,
                                           std::size_t samples, Rng& rng) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument("first_moment_check: matrices must be square with equal dims");
  if (!is_hermitian(a) || !is_hermitian(b))
    throw std::invalid_argument("first_moment_check: matrices must be Hermitian");
  const int dim = static_cast<int>(a.rows());
  const double oracle = (a.trace() * b.trace()).real() / dim;
  MeanAccumulator acc;
  for (std::size_t s = 0; s < samples; ++s) {
    const ComplexMatrix u = sample_haar_unitary(dim, rng);
    acc.add((a * (u.adjoint() * b * u)).trace().real());
  }
  return detail::finish_report(acc, oracle);
}

// Degree-2 Weingarten constants: Wg(1^2) for the identity permutation and
// Wg(2) for the transposition.
inline double weingarten_identity2(int dim) {
  return 1.0 / (static_cast<double>(dim) * dim - 1.0);
}
inline double weingarten_swap2(int dim) {
  return -1.0 / (dim * (static_cast<double>(dim) * dim - 1.0));
}

/// Degree-2 twirl E_U Tr[U A U^dag B]^2 via the Weingarten expansion over S_2.
inline double second_moment_weingarten(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int dim = static_cast<int>(a.rows());
  const double ta = a.trace().real(), ta2 = (a * a).trace().real();
  const double tb = b.trace().real(), tb2 = (b * b).trace().real();
  return weingarten_identity2(dim) * (ta * ta * tb * tb + ta2 * tb2) +
         weingarten_swap2(dim) * (ta * ta * tb2 + ta2 * tb * tb);
}

/// Closed form of E_U Tr[Pi_1 M]^2 for a rank-(d/k) Haar projector.
inline double projector_second_moment_oracle(const ComplexMatrix& m, int dim, int k) {
  if (m.rows() != dim || m.cols() != dim)
    throw std::invalid_argument("projector_second_moment_oracle: dimension mismatch");
  if (k < 1 || dim % k != 0)
    throw std::invalid_argument("projector_second_moment_oracle: k must divide d");
  if (!is_hermitian(m))
    throw std::invalid_argument("projector_second_moment_oracle: matrix must be Hermitian");
  const double t1 = m.trace().real();
  const double t2 = (m * m).trace().real();
  const double d = dim;
  const double kk = k;
  return (t1 * t1 * (d * d / kk - 1.0) + t2 * d * (1.0 - 1.0 / kk)) / (kk * (d * d - 1.0));
}

struct FourthMomentReport {
  HaarSampleReport pure;    // E Tr[Pi_1 Delta]^4 vs its upper bound
  HaarSampleReport cross;   // E Tr[Pi_1 Delta]^2 Tr[Pi_2 Delta]^2 vs its bound
  double bound_pure = 0.0;
  double bound_cross = 0.0;
  bool pure_ok = false;   // estimate <= bound + 4 SE
  bool cross_ok = false;
};

/// Monte Carlo fourth moments of a traceless perturbation under Haar
/// projectors, gated against the closed-form upper bounds with the O(1/d)
/// slack fixed at 10/d.
inline FourthMomentReport fourth_moment_bound_check(const ComplexMatrix& delta, int dim, int k,
                                                    std::size_t samples, Rng& rng) {
  if (delta.rows() != dim || delta.cols() != dim)
    throw std::invalid_argument("fourth_moment_bound_check: dimension mismatch");
  if (!is_hermitian(delta))
    throw std::invalid_argument("fourth_moment_bound_check: Delta must be Hermitian");
  if (std::abs(delta.trace()) > 1e-10)
    throw std::invalid_argument("fourth_moment_bound_check: Delta must be traceless");
  if (k < 2 || dim % k != 0)
    throw std::invalid_argument("fourth_moment_bound_check: k must divide d, k >= 2");

  const double t2 = (delta * delta).trace().real();
  const double d = dim;
  const double kk = k;
  const double base = t2 * t2 / (d * d * kk * kk);
  const double slack = 10.0 / d;
  const double bound_pure = 3.0 * base * ((1.0 - 1.0 / kk) * (1.0 - 1.0 / kk) + 2.0 * kk / d + slack);
  const double bound_cross = base * (1.0 - 2.0 / kk + 3.0 / (kk * kk) + slack);

  const int rank = dim / k;
  MeanAccumulator acc_pure, acc_cross;
  for (std::size_t s = 0; s < samples; ++s) {
    const ComplexMatrix u = sample_haar_unitary(dim, rng);
    const ComplexMatrix block1 = u.middleCols(0, rank);
    const ComplexMatrix block2 = u.middleCols(rank, rank);
    const double q1 = (block1.adjoint() * delta * block1).trace().real();
    const double q2 = (block2.adjoint() * delta * block2).trace().real();
    acc_pure.add(q1 * q1 * q1 * q1);
    acc_cross.add(q1 * q1 * q2 * q2);
  }

  FourthMomentReport report;
  report.pure = detail::finish_report(acc_pure, bound_pure);
  report.cross = detail::finish_report(acc_cross, bound_cross);
  report.bound_pure = bound_pure;
  report.bound_cross = bound_cross;
  report.pure_ok = report.pure.estimate <= bound_pure + 4.0 * report.pure.std_error;
  report.cross_ok = report.cross.estimate <= bound_cross + 4.0 * report.cross.std_error;
  return report;
}

struct CompressionReport {
  std::size_t samples = 0;
  double norm_threshold = 0.0;      // 10/sqrt(k)
  double distance_threshold = 0.0;  // 0.07 ||rho - sigma||_HS / sqrt(d)
  double fraction_norm = 0.0;       // P(||p_rho|| <= norm threshold)
  double fraction_distance = 0.0;   // P(||p_rho - p_sigma|| >= distance threshold)
  WilsonInterval norm_interval;
  WilsonInterval distance_interval;
};

/// Empirical check of the domain-compression event probabilities (0.98/0.13).
inline CompressionReport domain_compression_check(const DensityMatrix& rho, const DensityMatrix& sigma,
                                                  int k, std::size_t samples, Rng& rng) {
  if (rho.dim != sigma.dim) throw std::invalid_argument("domain_compression_check: dimension mismatch");
  const int dim = rho.dim;
  if (k < 1 || dim % k != 0)
    throw std::invalid_argument("domain_compression_check: k must divide d");

  CompressionReport report;
  report.samples = samples;
  report.norm_threshold = 10.0 / std::sqrt(static_cast<double>(k));
  report.distance_threshold = 0.07 * hs_norm(rho.matrix - sigma.matrix) / std::sqrt(static_cast<double>(dim));

  std::size_t hits_norm = 0, hits_distance = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const ComplexMatrix u = sample_haar_unitary(dim, rng);
    const Povm povm = haar_projector_povm(u, k);
    const OutcomeDistribution p = born_distribution(rho, povm);
    const OutcomeDistribution q = born_distribution(sigma, povm);
    if (p.l2_norm() <= report.norm_threshold) ++hits_norm;
    double dist_sq = 0.0;
    for (int x = 0; x < p.outcomes(); ++x) {
      const double gap = p.probs[x] - q.probs[x];
      dist_sq += gap * gap;
    }
    if (std::sqrt(dist_sq) >= report.distance_threshold) ++hits_distance;
  }
  report.fraction_norm = static_cast<double>(hits_norm) / samples;
  report.fraction_distance = static_cast<double>(hits_distance) / samples;
  report.norm_interval = wilson_interval(hits_norm, samples);
  report.distance_interval = wilson_interval(hits_distance, samples);
  return report;
}

}  // namespace qcert
