#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "qcert/tolerances.hpp"

namespace qcert {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline double hs_norm(const ComplexMatrix& a) { return a.norm(); }

/// <A, B> = Tr[A^dag B].
inline std::complex<double> hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.conjugate().cwiseProduct(b).sum();
}

inline bool is_hermitian(const ComplexMatrix& a, double rel_tol = tol::kHermiticity) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.norm());
  return (a - a.adjoint()).norm() <= rel_tol * scale;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  return 0.5 * (a + a.adjoint());
}

// Column-stacking vectorization: vec(|i><j|) = e_{j*d + i}, so
// <vec A, vec B> = Tr[A^dag B] and devectorize(vectorize(A)) = A.
inline ComplexVector vectorize(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("vectorize: matrix must be square");
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

inline ComplexMatrix devectorize(const ComplexVector& v, int dim) {
  if (dim <= 0 || v.size() != static_cast<Eigen::Index>(dim) * dim)
    throw std::invalid_argument("devectorize: length must be dim^2");
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct EigResult {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // orthonormal columns, A = V diag(w) V^dag
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
inline EigResult eig_hermitian(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eig_hermitian: matrix must be square");
  if (!is_hermitian(a)) throw std::invalid_argument("eig_hermitian: matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RealVector singular_values(const ComplexMatrix& a) {
  if (is_hermitian(a)) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
    return solver.eigenvalues().cwiseAbs();
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues();
}

/// Schatten p-norm for p in {1, 2, inf}.
inline double schatten_norm(const ComplexMatrix& a, double p) {
  if (!a.allFinite()) throw std::invalid_argument("schatten_norm: matrix has non-finite entries");
  if (p == 2.0) return a.norm();
  if (p == 1.0) return singular_values(a).sum();
  if (p == std::numeric_limits<double>::infinity()) {
    if (a.size() == 0) return 0.0;
    return singular_values(a).maxCoeff();
  }
  throw std::invalid_argument("schatten_norm: p must be 1, 2, or inf");
}

inline double trace_norm(const ComplexMatrix& a) { return schatten_norm(a, 1.0); }
inline double op_norm(const ComplexMatrix& a) {
  return schatten_norm(a, std::numeric_limits<double>::infinity());
}

}  // namespace qcert
