#include "qcert/mic.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "qcert/rng.hpp"
#include "qcert/states.hpp"

namespace qcert {
namespace {

TEST(MicMatrix, CanonicalBasisIsRankDProjector) {
  const MicMatrix mic = mic_matrix(canonical_basis_povm(2));
  const EigResult eig = eig_hermitian(mic.matrix);
  int unit = 0, zero = 0;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(eig.eigenvalues(i) - 1.0) < 1e-10) ++unit;
    if (std::abs(eig.eigenvalues(i)) < 1e-10) ++zero;
  }
  EXPECT_EQ(unit, 2);
  EXPECT_EQ(zero, 2);
  // projector onto span{vec|0><0|, vec|1><1|}
  for (int x = 0; x < 2; ++x) {
    ComplexMatrix e = ComplexMatrix::Zero(2, 2);
    e(x, x) = 1.0;
    EXPECT_LT((mic.matrix * vectorize(e) - vectorize(e)).norm(), 1e-12);
  }
}

TEST(MicMatrix, PauliPovmClosedForm) {
  const ComplexMatrix sz = pauli_set(1)[2];
  const MicMatrix mic = mic_matrix(pauli_povm(sz));
  const ComplexVector vi = vectorize(ComplexMatrix::Identity(2, 2));
  const ComplexVector vz = vectorize(sz);
  const ComplexMatrix expected = (vi * vi.adjoint() + vz * vz.adjoint()) / 2.0;
  EXPECT_LT((mic.matrix - expected).norm(), 1e-12);
}

TEST(MicMatrix, TrivialPovm) {
  const Povm trivial{2, {ComplexMatrix::Identity(2, 2)}};
  const MicMatrix mic = mic_matrix(trivial);
  const ComplexVector vi = vectorize(ComplexMatrix::Identity(2, 2));
  EXPECT_LT((mic.matrix - vi * vi.adjoint() / 2.0).norm(), 1e-12);
}

TEST(MicMatrix, AllZeroPovmRejected) {
  const Povm degenerate{2, {ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)}};
  EXPECT_THROW(mic_matrix(degenerate), std::invalid_argument);
}

TEST(MicApply, UnitalTracePreservingAndAgreesWithDirectSum) {
  Rng rng(88);
  const Povm povm = random_povm(4, 3, rng);
  const MicMatrix mic = mic_matrix(povm);
  const ComplexMatrix identity = ComplexMatrix::Identity(4, 4);
  EXPECT_LT((mic_apply(mic, identity) - identity).norm(), 1e-10);

  for (int rep = 0; rep < 50; ++rep) {
    const ComplexMatrix probe = random_density(4, rng).matrix;
    const ComplexMatrix image = mic_apply(mic, probe);
    EXPECT_NEAR(image.trace().real(), probe.trace().real(), 1e-10);
    // direct summation route
    ComplexMatrix direct = ComplexMatrix::Zero(4, 4);
    for (const ComplexMatrix& effect : povm.effects)
      direct += effect * hs_inner(effect, probe) / effect.trace().real();
    EXPECT_LT((image - direct).norm(), 1e-10);
  }
}

TEST(MicApply, CanonicalKillsPlusState) {
  const MicMatrix mic = mic_matrix(canonical_basis_povm(4));
  const ComplexMatrix gap = plus_state(4).matrix - maximally_mixed(4).matrix;
  EXPECT_LE(mic_apply(mic, gap).norm(), 1e-12);
}

TEST(MicPropertyReport, ClosedNormsAndRandomPovms) {
  const MicPropertyReport canonical = mic_property_report(canonical_basis_povm(4));
  EXPECT_NEAR(canonical.trace_norm, 4.0, 1e-9);
  EXPECT_NEAR(canonical.hs_norm, 2.0, 1e-9);
  EXPECT_NEAR(canonical.op_norm, 1.0, 1e-9);

  const MicPropertyReport pauli = mic_property_report(pauli_povm(pauli_set(2)[4]));
  EXPECT_NEAR(pauli.trace_norm, 2.0, 1e-9);
  EXPECT_NEAR(pauli.hs_norm, std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(pauli.op_norm, 1.0, 1e-9);

  Rng rng(14);
  for (int rep = 0; rep < 10; ++rep) {
    const MicPropertyReport report = mic_property_report(random_povm(4, 3, rng));
    EXPECT_TRUE(report.psd);
    EXPECT_TRUE(report.unital);
    EXPECT_TRUE(report.trace_preserving);
    EXPECT_TRUE(report.hermiticity_preserving);
    EXPECT_TRUE(report.op_norm_bound);
    EXPECT_TRUE(report.trace_norm_bound);
    EXPECT_TRUE(report.holder_chain);
    EXPECT_LE(report.hs_norm * report.hs_norm, report.op_norm * report.trace_norm + 1e-8);
  }
}

TEST(MicEigenbasis, CanonicalTwoDimensional) {
  const MicEigenbasis basis = mic_eigenbasis(mic_matrix(canonical_basis_povm(2)));
  ASSERT_EQ(basis.vectors.size(), 4u);
  EXPECT_NEAR(basis.eigenvalues[0], 0.0, 1e-10);
  EXPECT_NEAR(basis.eigenvalues[1], 0.0, 1e-10);
  EXPECT_NEAR(basis.eigenvalues[2], 1.0, 1e-10);
  EXPECT_NEAR(basis.eigenvalues[3], 1.0, 1e-10);

  // kernel spans {sigma_X, sigma_Y}/sqrt(2)
  const std::vector<ComplexMatrix> paulis = pauli_set(1);
  for (int which : {0, 1}) {
    const ComplexMatrix target = paulis[which] / std::sqrt(2.0);
    double coeff_sq = 0.0;
    for (int j = 0; j < 2; ++j) {
      const double overlap = hs_inner(basis.vectors[j], target).real();
      coeff_sq += overlap * overlap;
    }
    EXPECT_NEAR(coeff_sq, 1.0, 1e-9);
  }
  // last vector pinned to I/sqrt(d)
  EXPECT_LT((basis.vectors[3] - ComplexMatrix::Identity(2, 2) / std::sqrt(2.0)).norm(), 1e-10);
}

TEST(MicEigenbasis, PauliZPovm) {
  const ComplexMatrix sz = pauli_set(1)[2];
  const MicEigenbasis basis = mic_eigenbasis(mic_matrix(pauli_povm(sz)));
  EXPECT_NEAR(basis.eigenvalues[0], 0.0, 1e-10);
  EXPECT_NEAR(basis.eigenvalues[1], 0.0, 1e-10);
  EXPECT_NEAR(basis.eigenvalues[2], 1.0, 1e-10);  // sigma_Z direction
  EXPECT_NEAR(std::abs(hs_inner(basis.vectors[2], sz / std::sqrt(2.0)).real()), 1.0, 1e-9);
  EXPECT_NEAR(basis.eigenvalues[3], 1.0, 1e-10);  // identity, pinned last
}

TEST(MicEigenbasis, ReconstructsChannelOnProbes) {
  Rng rng(15);
  for (int rep = 0; rep < 5; ++rep) {
    const Povm povm = random_povm(4, 2 + static_cast<int>(rng.below(3)), rng);
    const MicMatrix mic = mic_matrix(povm);
    const MicEigenbasis basis = mic_eigenbasis(mic);
    ASSERT_EQ(basis.vectors.size(), 16u);
    EXPECT_LT((basis.vectors.back() - ComplexMatrix::Identity(4, 4) / 2.0).norm(), 1e-9);
    EXPECT_NEAR(basis.eigenvalues.back(), 1.0, 1e-9);
    for (std::size_t j = 0; j + 1 < basis.vectors.size(); ++j)
      EXPECT_LT(std::abs(basis.vectors[j].trace()), 1e-8);

    for (int probe_rep = 0; probe_rep < 10; ++probe_rep) {
      const ComplexMatrix probe = random_density(4, rng).matrix;
      ComplexMatrix rebuilt = ComplexMatrix::Zero(4, 4);
      for (std::size_t j = 0; j < basis.vectors.size(); ++j)
        rebuilt += basis.eigenvalues[j] * hs_inner(basis.vectors[j], probe) * basis.vectors[j];
      EXPECT_LT((rebuilt - mic_apply(mic, probe)).norm(), 1e-8);
    }
  }
}

TEST(AverageMic, IdenticalAndMixedSchemes) {
  const Povm z_basis = canonical_basis_povm(2);
  const MicMatrix single = mic_matrix(z_basis);
  const MicMatrix repeated = average_mic(repeated_scheme(z_basis, 7));
  EXPECT_LT((repeated.matrix - single.matrix).norm(), 1e-12);

  // Z and X basis mix has rank 3: directions I, sigma_Z, sigma_X
  const ComplexMatrix sx = pauli_set(1)[0];
  const Povm x_basis = haar_projector_povm(eig_hermitian(sx).eigenvectors, 2);
  const MicMatrix avg = average_mic(make_fixed_scheme({z_basis, x_basis}, {1, 1}));
  const EigResult eig = eig_hermitian(avg.matrix);
  int nonzero = 0;
  for (int i = 0; i < 4; ++i) nonzero += eig.eigenvalues(i) > 1e-10;
  EXPECT_EQ(nonzero, 3);
  EXPECT_LE(avg.matrix.trace().real(), std::max(single.matrix.trace().real(),
                                                mic_matrix(x_basis).matrix.trace().real()) +
                                           1e-10);
  EXPECT_THROW(average_mic(FixedScheme{}), std::invalid_argument);
}

TEST(LowerBoundCertificate, WorkedExamples) {
  const LowerBoundCertificate canonical = lower_bound_certificate({canonical_basis_povm(4)}, 0.1);
  EXPECT_NEAR(canonical.n_randomized, 800.0, 1e-6);
  EXPECT_NEAR(canonical.n_fixed, 1600.0, 1e-6);

  std::vector<Povm> paulis;
  for (const ComplexMatrix& p : pauli_set(2)) paulis.push_back(pauli_povm(p));
  const LowerBoundCertificate pauli_cert = lower_bound_certificate(paulis, 0.1);
  EXPECT_NEAR(pauli_cert.sup_trace, 2.0, 1e-9);
  EXPECT_NEAR(pauli_cert.n_fixed, 3200.0, 1e-6);

  // consistency: sup_hs >= sup_trace / d and n_fixed >= n_randomized / d
  EXPECT_GE(canonical.sup_hs, canonical.sup_trace / 4.0 - 1e-12);
  EXPECT_GE(canonical.n_fixed, canonical.n_randomized / 4.0 - 1e-9);

  EXPECT_THROW(lower_bound_certificate({}, 0.1), std::invalid_argument);
  EXPECT_THROW(lower_bound_certificate({canonical_basis_povm(4)}, 1.5), std::invalid_argument);
  EXPECT_THROW(lower_bound_certificate({canonical_basis_povm(4)}, 0.0), std::invalid_argument);
}

TEST(MicInvariants, MutationIsNamed) {
  // unnormalized accumulation (missing the 1/Tr[M_x] weights) breaks unitality
  const Povm povm = canonical_basis_povm(4);
  ComplexMatrix corrupted = ComplexMatrix::Zero(16, 16);
  for (const ComplexMatrix& effect : povm.effects) {
    const ComplexVector v = vectorize(effect);
    corrupted += 2.0 * (v * v.adjoint());
  }
  const std::vector<std::string> violations = check_mic_invariants(corrupted, 4);
  ASSERT_FALSE(violations.empty());
  EXPECT_NE(violations.front().find("unital"), std::string::npos);
  EXPECT_TRUE(check_mic_invariants(mic_matrix(povm).matrix, 4).empty());
}

}  // namespace
}  // namespace qcert
