#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "qcert/haar_sampling.hpp"
#include "qcert/hermitian.hpp"
#include "qcert/rng.hpp"
#include "qcert/tolerances.hpp"

namespace qcert {

inline bool is_power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

inline int log2_exact(int x) {
  if (!is_power_of_two(x)) throw std::invalid_argument("log2_exact: not a power of two");
  int n = 0;
  while ((1 << n) < x) ++n;
  return n;
}

struct DensityMatrix {
  int dim = 0;
  ComplexMatrix matrix;
};

/// Validates PSD (eigenvalue floor), unit trace, and Hermiticity.
inline DensityMatrix make_density(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("density matrix must be square and non-empty");
  if (!is_hermitian(m)) throw std::invalid_argument("density matrix is not Hermitian within tolerance");
  const double trace_gap = std::abs(m.trace() - std::complex<double>(1.0, 0.0));
  if (trace_gap > tol::kTraceOne)
    throw std::invalid_argument("density matrix trace differs from 1 by " + std::to_string(trace_gap));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  if (solver.eigenvalues().minCoeff() < tol::kPsdFloor)
    throw std::invalid_argument("density matrix has eigenvalue below the PSD floor");
  return {static_cast<int>(m.rows()), hermitian_part(m)};
}

inline DensityMatrix maximally_mixed(int dim) {
  if (dim < 1) throw std::invalid_argument("maximally_mixed: dim must be positive");
  return {dim, ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim)};
}

inline DensityMatrix pure_state(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-9) throw std::invalid_argument("pure_state: vector is not normalized");
  return {static_cast<int>(psi.size()), (psi * psi.adjoint()) / (norm * norm)};
}

/// |phi> = d^{-1/2} sum_x |x>, the state a fixed canonical-basis scheme cannot
/// tell apart from the maximally mixed state.
inline DensityMatrix plus_state(int dim) {
  if (!is_power_of_two(dim)) throw std::invalid_argument("plus_state: dim must be a power of two");
  ComplexVector psi = ComplexVector::Constant(dim, std::complex<double>(1.0 / std::sqrt(dim), 0.0));
  return pure_state(psi);
}

inline DensityMatrix basis_state(int dim, int j) {
  if (j < 0 || j >= dim) throw std::invalid_argument("basis_state: index out of range");
  ComplexVector psi = ComplexVector::Zero(dim);
  psi(j) = 1.0;
  return pure_state(psi);
}

// Haar-rotated diagonal with Dirichlet(1,...,1) spectrum: full-rank generic
// state with a valid spectrum by construction.
inline DensityMatrix random_density(int dim, Rng& rng) {
  if (!is_power_of_two(dim)) throw std::invalid_argument("random_density: dim must be a power of two");
  RealVector spectrum(dim);
  double total = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double e = -std::log(1.0 - rng.uniform());  // Exp(1)
    spectrum(i) = e;
    total += e;
  }
  spectrum /= total;
  const ComplexMatrix u = sample_haar_unitary(dim, rng);
  ComplexMatrix m = u * spectrum.asDiagonal() * u.adjoint();
  return {dim, hermitian_part(m)};
}

inline double trace_distance_norm(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_norm(a.matrix - b.matrix);
}

}  // namespace qcert
