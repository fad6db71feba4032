#pragma once

#include <complex>
#include <stdexcept>

#include "qcert/hermitian.hpp"
#include "qcert/rng.hpp"

namespace qcert {

// Haar-distributed unitary: complex Ginibre matrix, QR, then each column of Q
// multiplied by the phase of the matching diagonal entry of R. Without the
// phase fix the QR output is not Haar.
inline ComplexMatrix sample_haar_unitary(int dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("sample_haar_unitary: dim must be positive");
  ComplexMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = rng.complex_gaussian();
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const std::complex<double> rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0) ? rjj / mag : std::complex<double>(1.0, 0.0);
  }
  return q;
}

}  // namespace qcert
