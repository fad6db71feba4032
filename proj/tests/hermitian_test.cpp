#include "qcert/hermitian.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "qcert/rng.hpp"
#include "qcert/states.hpp"

namespace qcert {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ComplexMatrix random_hermitian(int dim, Rng& rng) {
  ComplexMatrix a(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) a(i, j) = rng.complex_gaussian();
  return hermitian_part(a);
}

ComplexMatrix random_complex(int dim, Rng& rng) {
  ComplexMatrix a(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) a(i, j) = rng.complex_gaussian();
  return a;
}

TEST(Vectorize, OuterProductConvention) {
  // vec(|i><j|) = e_{j*d + i}
  const int d = 3;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(i, j) = 1.0;
      const ComplexVector v = vectorize(m);
      for (int idx = 0; idx < d * d; ++idx)
        EXPECT_DOUBLE_EQ(std::abs(v(idx)), idx == j * d + i ? 1.0 : 0.0);
    }
}

TEST(Vectorize, ZeroMatrix) {
  EXPECT_DOUBLE_EQ(vectorize(ComplexMatrix::Zero(4, 4)).norm(), 0.0);
}

TEST(Vectorize, IsometryAgainstDirectTrace) {
  Rng rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    const ComplexMatrix a = random_complex(3, rng);
    const ComplexMatrix b = random_complex(3, rng);
    const std::complex<double> via_vec = vectorize(a).dot(vectorize(b));  // conj(a) . b
    const std::complex<double> via_trace = (a.adjoint() * b).trace();
    EXPECT_LT(std::abs(via_vec - via_trace), 1e-10);
  }
  const ComplexMatrix h = random_hermitian(3, rng);
  EXPECT_NEAR(vectorize(h).squaredNorm(), (h.adjoint() * h).trace().real(), 1e-10);
}

TEST(Vectorize, RoundTripAndErrors) {
  Rng rng(5);
  const ComplexMatrix a = random_complex(4, rng);
  EXPECT_LT((devectorize(vectorize(a), 4) - a).norm(), 1e-15);
  EXPECT_THROW(vectorize(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
  EXPECT_THROW(devectorize(ComplexVector::Zero(5), 2), std::invalid_argument);
}

TEST(SchattenNorm, IdentityTraceNorm) {
  for (int d : {2, 4, 8}) EXPECT_NEAR(schatten_norm(ComplexMatrix::Identity(d, d), 1.0), d, 1e-12);
}

TEST(SchattenNorm, HsEqualsFrobenius) {
  Rng rng(7);
  const ComplexMatrix a = random_complex(5, rng);
  EXPECT_NEAR(schatten_norm(a, 2.0), std::sqrt((a.adjoint() * a).trace().real()), 1e-10);
}

TEST(SchattenNorm, HolderAndNormChain) {
  Rng rng(13);
  for (int rep = 0; rep < 100; ++rep) {
    const int d = 2 + static_cast<int>(rng.below(5));
    const ComplexMatrix a = random_complex(d, rng);
    const double s1 = schatten_norm(a, 1.0);
    const double s2 = schatten_norm(a, 2.0);
    const double sinf = schatten_norm(a, kInf);
    EXPECT_LE(s2 * s2, sinf * s1 + 1e-9 * std::max(1.0, s1));
    EXPECT_LE(s2, s1 + 1e-9);
    EXPECT_LE(s1, std::sqrt(static_cast<double>(d)) * s2 + 1e-9 * std::max(1.0, s2));
  }
}

TEST(SchattenNorm, PlusVersusMixedTraceDistance) {
  for (int d : {2, 4, 8}) {
    const ComplexMatrix gap = plus_state(d).matrix - maximally_mixed(d).matrix;
    EXPECT_NEAR(schatten_norm(gap, 1.0), 2.0 * (1.0 - 1.0 / d), 1e-10);
  }
}

TEST(SchattenNorm, RejectsUnsupportedOrder) {
  EXPECT_THROW(schatten_norm(ComplexMatrix::Identity(2, 2), 3.0), std::invalid_argument);
}

TEST(EigHermitian, IdentityAndPauliZ) {
  const EigResult id = eig_hermitian(ComplexMatrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(id.eigenvalues(i), 1.0, 1e-12);

  ComplexMatrix sz(2, 2);
  sz << 1, 0, 0, -1;
  const EigResult z = eig_hermitian(sz);
  EXPECT_NEAR(z.eigenvalues(0), -1.0, 1e-12);
  EXPECT_NEAR(z.eigenvalues(1), 1.0, 1e-12);
}

TEST(EigHermitian, ReconstructionAndOrthonormality) {
  Rng rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    const int d = 2 + static_cast<int>(rng.below(7));
    const ComplexMatrix a = random_hermitian(d, rng);
    const EigResult eig = eig_hermitian(a);
    const ComplexMatrix v = eig.eigenvectors;
    EXPECT_LE((a * v - v * eig.eigenvalues.asDiagonal().toDenseMatrix().cast<std::complex<double>>())
                  .norm(),
              1e-9 * std::max(1.0, a.norm()));
    EXPECT_LE((v.adjoint() * v - ComplexMatrix::Identity(d, d)).norm(), 1e-9);
    for (int i = 0; i + 1 < d; ++i) EXPECT_LE(eig.eigenvalues(i), eig.eigenvalues(i + 1));
  }
}

TEST(EigHermitian, RejectsNonHermitian) {
  ComplexMatrix bad(2, 2);
  bad << 0, 1, 0, 0;
  EXPECT_THROW(eig_hermitian(bad), std::invalid_argument);
}

}  // namespace
}  // namespace qcert
