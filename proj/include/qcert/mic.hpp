#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcert/hermitian.hpp"
#include "qcert/measurement.hpp"
#include "qcert/tolerances.hpp"

namespace qcert {

// Matrix representation of the measurement information channel
// H(A) = sum_x M_x Tr[M_x A] / Tr[M_x]:  C = sum_x vec(M_x) vec(M_x)^dag / Tr[M_x].
struct MicMatrix {
  int dim = 0;
  ComplexMatrix matrix;  // d^2 x d^2, Hermitian PSD, C vec(I) = vec(I)
  bool averaged = false;
};

/// Named invariant violations of a candidate MIC matrix; empty means valid.
inline std::vector<std::string> check_mic_invariants(const ComplexMatrix& c, int dim) {
  std::vector<std::string> violations;
  if (c.rows() != c.cols() || c.rows() != static_cast<Eigen::Index>(dim) * dim) {
    violations.push_back("mic: matrix must be d^2 x d^2");
    return violations;
  }
  if (!is_hermitian(c)) violations.push_back("mic: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(c));
  if (solver.eigenvalues().minCoeff() < tol::kPsdFloor)
    violations.push_back("mic: matrix is not positive semidefinite");
  const ComplexVector vec_identity = vectorize(ComplexMatrix::Identity(dim, dim));
  if ((c * vec_identity - vec_identity).norm() > 1e-8)
    violations.push_back("mic: channel is not unital (C vec(I) != vec(I))");
  return violations;
}

/// Build C from a POVM. Effects with trace <= 1e-12 carry no information and
/// are skipped (the summand divides by Tr[M_x]).
inline MicMatrix mic_matrix(const Povm& povm) {
  const int dim = povm.dim;
  const Eigen::Index dd = static_cast<Eigen::Index>(dim) * dim;
  ComplexMatrix c = ComplexMatrix::Zero(dd, dd);
  bool any = false;
  for (const ComplexMatrix& effect : povm.effects) {
    const double tr = effect.trace().real();
    if (tr <= tol::kZeroEffect) continue;
    const ComplexVector v = vectorize(effect);
    c.noalias() += (v * v.adjoint()) / tr;
    any = true;
  }
  if (!any) throw std::invalid_argument("mic_matrix: all effects have vanishing trace");
  const std::vector<std::string> violations = check_mic_invariants(c, dim);
  if (!violations.empty()) throw std::runtime_error("mic_matrix: " + violations.front());
  return {dim, std::move(c), false};
}

/// Apply the channel through its matrix representation: devec(C vec(A)).
inline ComplexMatrix mic_apply(const MicMatrix& mic, const ComplexMatrix& a) {
  if (a.rows() != mic.dim || a.cols() != mic.dim)
    throw std::invalid_argument("mic_apply: dimension mismatch");
  return devectorize(mic.matrix * vectorize(a), mic.dim);
}

struct MicPropertyReport {
  int dim = 0;
  int outcomes = 0;
  double min_eigenvalue = 0.0;
  double unital_residual = 0.0;
  double trace_residual = 0.0;       // max |Tr[H(B)] - Tr[B]| over probe basis
  double hermiticity_residual = 0.0; // max Hermiticity defect of H(B) over probes
  double op_norm = 0.0;
  double trace_norm = 0.0;
  double hs_norm = 0.0;
  bool psd = false;
  bool unital = false;
  bool trace_preserving = false;
  bool hermiticity_preserving = false;
  bool op_norm_bound = false;     // ||H||_inf <= 1
  bool trace_norm_bound = false;  // ||H||_1 <= min{d, k}
  bool holder_chain = false;      // ||H||_HS^2 <= ||H||_1
};

namespace detail {
/// Exact Hermitian basis of Herm(d): E_ii, (E_ij + E_ji)/sqrt(2), and the
/// imaginary pairs. Checking a linear map on this basis checks it everywhere.
inline std::vector<ComplexMatrix> hermitian_probe_basis(int dim) {
  std::vector<ComplexMatrix> probes;
  probes.reserve(static_cast<std::size_t>(dim) * dim);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    e(i, i) = 1.0;
    probes.push_back(std::move(e));
  }
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      ComplexMatrix re = ComplexMatrix::Zero(dim, dim);
      re(i, j) = s;
      re(j, i) = s;
      probes.push_back(std::move(re));
      ComplexMatrix im = ComplexMatrix::Zero(dim, dim);
      im(i, j) = std::complex<double>(0.0, s);
      im(j, i) = std::complex<double>(0.0, -s);
      probes.push_back(std::move(im));
    }
  return probes;
}
}  // namespace detail

inline MicPropertyReport mic_property_report(const Povm& povm) {
  const MicMatrix mic = mic_matrix(povm);
  const int dim = mic.dim;

  MicPropertyReport report;
  report.dim = dim;
  report.outcomes = povm.outcomes();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(mic.matrix));
  const RealVector eigs = solver.eigenvalues();
  report.min_eigenvalue = eigs.minCoeff();
  report.op_norm = eigs.cwiseAbs().maxCoeff();
  report.trace_norm = eigs.cwiseAbs().sum();
  report.hs_norm = std::sqrt(eigs.cwiseAbs2().sum());

  const ComplexMatrix identity = ComplexMatrix::Identity(dim, dim);
  report.unital_residual = (mic_apply(mic, identity) - identity).norm();

  for (const ComplexMatrix& probe : detail::hermitian_probe_basis(dim)) {
    const ComplexMatrix image = mic_apply(mic, probe);
    report.trace_residual =
        std::max(report.trace_residual, std::abs((image.trace() - probe.trace()).real()) +
                                            std::abs(image.trace().imag()));
    report.hermiticity_residual = std::max(report.hermiticity_residual, (image - image.adjoint()).norm());
  }

  report.psd = report.min_eigenvalue >= tol::kPsdFloor;
  report.unital = report.unital_residual <= 1e-10;
  report.trace_preserving = report.trace_residual <= 1e-10;
  report.hermiticity_preserving = report.hermiticity_residual <= 1e-10;
  report.op_norm_bound = report.op_norm <= 1.0 + 1e-8;
  const double limit = std::min(dim, povm.outcomes());
  report.trace_norm_bound = report.trace_norm <= limit + 1e-8;
  report.holder_chain = report.hs_norm * report.hs_norm <= report.trace_norm + 1e-8;
  return report;
}

// Eigenbasis of the channel realified into Hermitian matrices, eigenvalues
// ascending over the traceless sector, I/sqrt(d) pinned last with eigenvalue
// 1. The channel is Hermiticity preserving, so every eigenspace is closed
// under conjugate transpose and admits a Hermitian basis; generic numerics
// return complex combinations, recovered here by projecting Hermitian probes
// onto each eigenspace and re-orthonormalizing.
struct MicEigenbasis {
  std::vector<double> eigenvalues;     // aligned with vectors
  std::vector<ComplexMatrix> vectors;  // d^2 Hermitian matrices, orthonormal
};

inline MicEigenbasis mic_eigenbasis(const MicMatrix& mic) {
  const int dim = mic.dim;
  const Eigen::Index dd = static_cast<Eigen::Index>(dim) * dim;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(mic.matrix));
  const RealVector eigs = solver.eigenvalues();
  const ComplexMatrix q = solver.eigenvectors();

  const ComplexMatrix identity_unit = ComplexMatrix::Identity(dim, dim) / std::sqrt(static_cast<double>(dim));
  const ComplexVector vec_unit = vectorize(identity_unit);

  const std::vector<ComplexMatrix> probes = detail::hermitian_probe_basis(dim);

  std::vector<double> values;
  std::vector<ComplexMatrix> vectors;
  values.reserve(dd);
  vectors.reserve(dd);

  constexpr double kCluster = 1e-8;
  constexpr double kRankFloor = 1e-6;

  Eigen::Index lo = 0;
  while (lo < dd) {
    Eigen::Index hi = lo + 1;
    while (hi < dd && eigs(hi) - eigs(hi - 1) <= kCluster) ++hi;
    const Eigen::Index size = hi - lo;
    const ComplexMatrix block = q.middleCols(lo, size);
    const double lambda = eigs.segment(lo, size).mean();

    std::vector<ComplexMatrix> found;
    const bool unit_cluster = std::abs(lambda - 1.0) <= 1e-6 &&
                              (block * (block.adjoint() * vec_unit) - vec_unit).norm() <= 1e-6;
    if (unit_cluster) found.push_back(identity_unit);

    for (const ComplexMatrix& probe : probes) {
      if (static_cast<Eigen::Index>(found.size()) == size) break;
      ComplexVector w = block * (block.adjoint() * vectorize(probe));
      ComplexMatrix cand = hermitian_part(devectorize(w, dim));
      for (int pass = 0; pass < 2; ++pass)
        for (const ComplexMatrix& prev : found) cand -= hs_inner(prev, cand).real() * prev;
      const double norm = cand.norm();
      if (norm > kRankFloor) {
        cand /= norm;
        found.push_back(hermitian_part(cand));
      }
    }
    if (static_cast<Eigen::Index>(found.size()) != size)
      throw std::runtime_error("mic_eigenbasis: eigenspace realification failed beyond tolerance");

    for (std::size_t i = (unit_cluster ? 1 : 0); i < found.size(); ++i) {
      values.push_back(lambda);
      vectors.push_back(found[i]);
    }
    lo = hi;
  }

  values.push_back(1.0);
  vectors.push_back(identity_unit);

  // validate traceless sector and orthonormality
  for (std::size_t i = 0; i + 1 < vectors.size(); ++i)
    if (std::abs(vectors[i].trace()) > 1e-8)
      throw std::runtime_error("mic_eigenbasis: traceless eigenvector has nonzero trace");
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = i; j < vectors.size(); ++j) {
      const double gap = std::abs(hs_inner(vectors[i], vectors[j]).real() - (i == j ? 1.0 : 0.0));
      if (gap > 1e-8) throw std::runtime_error("mic_eigenbasis: basis is not orthonormal");
    }
  return {std::move(values), std::move(vectors)};
}

/// Entrywise average (1/n) sum_i C_i of a fixed scheme's per-copy MICs.
inline MicMatrix average_mic(const FixedScheme& scheme) {
  if (scheme.povms.empty()) throw std::invalid_argument("average_mic: empty scheme");
  const std::size_t total = scheme.total_copies();
  if (total == 0) throw std::invalid_argument("average_mic: scheme covers zero copies");
  const int dim = scheme.dim();
  const Eigen::Index dd = static_cast<Eigen::Index>(dim) * dim;
  ComplexMatrix avg = ComplexMatrix::Zero(dd, dd);
  for (std::size_t j = 0; j < scheme.povms.size(); ++j) {
    const double weight = static_cast<double>(scheme.counts[j]) / static_cast<double>(total);
    if (weight == 0.0) continue;
    avg += weight * mic_matrix(scheme.povms[j]).matrix;
  }
  return {dim, std::move(avg), true};
}

// Copy-complexity certificate from the norm suprema over a POVM set:
// n_R = d^2 / (eps^2 sup ||H||_HS), n_F = d^3 / (eps^2 sup ||H||_1).
// Values carry constant 1 and are order-only (the bounds are Omega(.)).
struct LowerBoundCertificate {
  double eps = 0.0;
  double sup_hs = 0.0;
  double sup_trace = 0.0;
  double n_randomized = 0.0;
  double n_fixed = 0.0;
  std::size_t povm_count = 0;
};

inline LowerBoundCertificate lower_bound_certificate(const std::vector<Povm>& povms, double eps) {
  if (povms.empty()) throw std::invalid_argument("lower_bound_certificate: empty POVM set");
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("lower_bound_certificate: eps must lie in (0, 1]");
  const int dim = povms.front().dim;
  LowerBoundCertificate cert;
  cert.eps = eps;
  cert.povm_count = povms.size();
  for (const Povm& povm : povms) {
    if (povm.dim != dim) throw std::invalid_argument("lower_bound_certificate: mixed dimensions");
    const MicPropertyReport report = mic_property_report(povm);
    cert.sup_hs = std::max(cert.sup_hs, report.hs_norm);
    cert.sup_trace = std::max(cert.sup_trace, report.trace_norm);
  }
  const double d = dim;
  cert.n_randomized = d * d / (eps * eps * cert.sup_hs);
  cert.n_fixed = d * d * d / (eps * eps * cert.sup_trace);
  return cert;
}

}  // namespace qcert
