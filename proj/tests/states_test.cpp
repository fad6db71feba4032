#include "qcert/states.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "qcert/measurement.hpp"
#include "qcert/rng.hpp"

namespace qcert {
namespace {

TEST(StandardStates, MixedAndPlus) {
  const DensityMatrix mixed = maximally_mixed(2);
  EXPECT_NEAR(mixed.matrix(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(mixed.matrix(1, 1).real(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(mixed.matrix(0, 1)), 0.0, 1e-15);

  const DensityMatrix plus = plus_state(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(plus.matrix(i, j).real(), 0.25, 1e-12);
}

TEST(StandardStates, RandomDensityInvariants) {
  Rng rng(303);
  for (int rep = 0; rep < 1000; ++rep) {
    const DensityMatrix rho = random_density(4, rng);
    EXPECT_NEAR(rho.matrix.trace().real(), 1.0, 1e-10);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix);
    EXPECT_GE(solver.eigenvalues().minCoeff(), tol::kPsdFloor);
  }
}

TEST(StandardStates, Validation) {
  EXPECT_THROW(plus_state(3), std::invalid_argument);
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);  // trace 2
  EXPECT_THROW(make_density(bad), std::invalid_argument);
  ComplexMatrix negative(2, 2);
  negative << 1.5, 0, 0, -0.5;
  EXPECT_THROW(make_density(negative), std::invalid_argument);
}

TEST(PovmValidation, CanonicalAndPauli) {
  const Povm canonical = canonical_basis_povm(4);
  EXPECT_TRUE(check_povm(canonical.effects).valid);
  EXPECT_EQ(canonical.outcomes(), 4);

  const Povm pauli = pauli_povm(pauli_set(1)[2]);  // sigma_Z
  EXPECT_TRUE(check_povm(pauli.effects).valid);
  EXPECT_EQ(pauli.outcomes(), 2);
}

TEST(PovmValidation, NamesViolatedInvariant) {
  const ComplexMatrix identity = ComplexMatrix::Identity(2, 2);
  const PovmReport completeness = check_povm({identity, identity});
  EXPECT_FALSE(completeness.valid);
  EXPECT_NE(completeness.error.find("completeness"), std::string::npos);

  ComplexMatrix negative(2, 2);
  negative << 2, 0, 0, -1;
  const PovmReport psd = check_povm({negative, identity - negative});
  EXPECT_FALSE(psd.valid);
  EXPECT_NE(psd.error.find("positive"), std::string::npos);

  EXPECT_THROW(make_povm({identity, identity}), std::invalid_argument);
}

TEST(BornRule, KnownDistributions) {
  const OutcomeDistribution uniform2 = born_distribution(maximally_mixed(2), canonical_basis_povm(2));
  EXPECT_NEAR(uniform2.probs[0], 0.5, 1e-12);
  EXPECT_NEAR(uniform2.probs[1], 0.5, 1e-12);

  const OutcomeDistribution plus4 = born_distribution(plus_state(4), canonical_basis_povm(4));
  for (double p : plus4.probs) EXPECT_NEAR(p, 0.25, 1e-12);

  // |0><0| against the Z POVM: the "+1" outcome (label 2) is certain
  const OutcomeDistribution z = born_distribution(basis_state(2, 0), pauli_povm(pauli_set(1)[2]));
  EXPECT_NEAR(z.probs[1], (1.0 + 1.0) / 2.0, 1e-12);
  EXPECT_NEAR(z.probs[0], 0.0, 1e-12);
}

TEST(BornRule, NegativeProbabilityBeyondClipTolerance) {
  // strongly non-PSD effect smuggled past make_povm: Born must refuse
  ComplexMatrix bad(2, 2), rest(2, 2);
  bad << 1.2, 0, 0, -0.2;
  rest << -0.2, 0, 0, 1.2;
  const Povm povm{2, {bad, rest}};
  EXPECT_THROW(born_distribution(basis_state(2, 1), povm), std::runtime_error);
}

TEST(BornRule, SumsToOne) {
  Rng rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const int d = 2 << rng.below(2);
    const Povm povm = random_povm(d, 2 + static_cast<int>(rng.below(4)), rng);
    const OutcomeDistribution p = born_distribution(random_density(d, rng), povm);
    double total = 0.0;
    for (double x : p.probs) {
      EXPECT_GE(x, 0.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(PauliSet, SingleQubitMatricesAndRelations) {
  const std::vector<ComplexMatrix> paulis = pauli_set(1);
  ASSERT_EQ(paulis.size(), 3u);
  ComplexMatrix x(2, 2), y(2, 2), z(2, 2);
  const std::complex<double> i(0, 1);
  x << 0, 1, 1, 0;
  y << 0, i, -i, 0;
  z << 1, 0, 0, -1;
  EXPECT_LT((paulis[0] - x).norm(), 1e-15);
  EXPECT_LT((paulis[1] - y).norm(), 1e-15);
  EXPECT_LT((paulis[2] - z).norm(), 1e-15);
}

TEST(PauliSet, CountTraceSquareOrthogonality) {
  for (int qubits : {1, 2}) {
    const int d = 1 << qubits;
    const std::vector<ComplexMatrix> paulis = pauli_set(qubits);
    EXPECT_EQ(static_cast<int>(paulis.size()), d * d - 1);
    for (std::size_t a = 0; a < paulis.size(); ++a) {
      EXPECT_LT(std::abs(paulis[a].trace()), 1e-10);
      EXPECT_LT((paulis[a] * paulis[a] - ComplexMatrix::Identity(d, d)).norm(), 1e-10);
      for (std::size_t b = 0; b < paulis.size(); ++b) {
        const double expected = a == b ? static_cast<double>(d) : 0.0;
        EXPECT_NEAR((paulis[a] * paulis[b]).trace().real(), expected, 1e-10);
      }
    }
  }
}

TEST(PauliProbabilityVector, MixedAndComputationalStates) {
  const std::vector<double> mm = pauli_probability_vector(maximally_mixed(4));
  EXPECT_EQ(mm.size(), 15u);
  for (double p : mm) EXPECT_NEAR(p, 0.5, 1e-12);

  const std::vector<double> p0 = pauli_probability_vector(basis_state(2, 0));
  const std::vector<double> p1 = pauli_probability_vector(basis_state(2, 1));
  double dist_sq = 0.0;
  for (std::size_t i = 0; i < p0.size(); ++i) dist_sq += (p0[i] - p1[i]) * (p0[i] - p1[i]);
  EXPECT_NEAR(std::sqrt(dist_sq), 1.0, 1e-12);
  const double hs = hs_norm(basis_state(2, 0).matrix - basis_state(2, 1).matrix);
  EXPECT_NEAR(std::sqrt(dist_sq), std::sqrt(2.0) / 2.0 * hs, 1e-12);
}

TEST(PauliProbabilityVector, IdentityOnRandomPairs) {
  Rng rng(99);
  for (int qubits : {1, 2, 3}) {
    const int d = 1 << qubits;
    for (int rep = 0; rep < 20; ++rep) {
      const DensityMatrix rho = random_density(d, rng);
      const DensityMatrix sigma = random_density(d, rng);
      const std::vector<double> pr = pauli_probability_vector(rho);
      const std::vector<double> ps = pauli_probability_vector(sigma);
      double dist_sq = 0.0;
      for (std::size_t i = 0; i < pr.size(); ++i) dist_sq += (pr[i] - ps[i]) * (pr[i] - ps[i]);
      EXPECT_NEAR(std::sqrt(dist_sq),
                  0.5 * std::sqrt(static_cast<double>(d)) * hs_norm(rho.matrix - sigma.matrix),
                  1e-10);
    }
  }
}

TEST(HaarProjectorPovm, IdentityBlocksAndRanks) {
  const Povm blocks = haar_projector_povm(ComplexMatrix::Identity(4, 4), 2);
  ComplexMatrix upper = ComplexMatrix::Zero(4, 4);
  upper(0, 0) = upper(1, 1) = 1.0;
  ComplexMatrix lower = ComplexMatrix::Zero(4, 4);
  lower(2, 2) = lower(3, 3) = 1.0;
  EXPECT_LT((blocks.effects[0] - upper).norm(), 1e-15);
  EXPECT_LT((blocks.effects[1] - lower).norm(), 1e-15);

  Rng rng(31);
  const ComplexMatrix u = sample_haar_unitary(8, rng);
  for (int k : {2, 4, 8}) {
    const Povm povm = haar_projector_povm(u, k);
    EXPECT_TRUE(check_povm(povm.effects).valid);
    for (const ComplexMatrix& effect : povm.effects)
      EXPECT_NEAR(effect.trace().real(), 8.0 / k, 1e-9);
  }
  EXPECT_THROW(haar_projector_povm(u, 3), std::invalid_argument);
  EXPECT_THROW(haar_projector_povm(u, 16), std::invalid_argument);
}

TEST(CopyOracle, EmpiricalFrequencyAndAccounting) {
  CopyOracle oracle(maximally_mixed(2), 100000, Rng(7));
  const Povm canonical = canonical_basis_povm(2);
  const std::vector<int> outcomes = oracle.measure_many(canonical, 100000);
  std::size_t ones = 0;
  for (int x : outcomes) {
    ASSERT_GE(x, 1);
    ASSERT_LE(x, 2);
    ones += x == 1;
  }
  const double freq = static_cast<double>(ones) / outcomes.size();
  const double se = std::sqrt(0.25 / outcomes.size());
  EXPECT_NEAR(freq, 0.5, 4.0 * se);
  EXPECT_EQ(oracle.consumed(), 100000u);
  EXPECT_EQ(oracle.remaining(), 0u);
  EXPECT_THROW(oracle.measure(canonical), std::runtime_error);
}

TEST(CopyOracle, Reproducibility) {
  const Povm povm = canonical_basis_povm(4);
  CopyOracle a(plus_state(4), 500, Rng(2024));
  CopyOracle b(plus_state(4), 500, Rng(2024));
  EXPECT_EQ(a.measure_many(povm, 500), b.measure_many(povm, 500));
}

TEST(RandomizedScheme, PlanIsDeterministicInSeedAndIndex) {
  // the randomized-k certifier's measurement plan: (seed, index) -> POVM
  RandomizedScheme scheme{4, [](std::uint64_t seed, std::size_t index) {
                            Rng rng(derive_seed(seed, index));
                            return haar_projector_povm(sample_haar_unitary(4, rng), 2);
                          }};
  const Povm a = scheme.plan(7, 3);
  const Povm b = scheme.plan(7, 3);
  const Povm c = scheme.plan(8, 3);
  EXPECT_EQ((a.effects[0] - b.effects[0]).norm(), 0.0);
  EXPECT_GT((a.effects[0] - c.effects[0]).norm(), 1e-3);
  EXPECT_TRUE(check_povm(a.effects).valid);
}

TEST(FixedScheme, ConstructionAndAccessors) {
  const FixedScheme scheme =
      cycling_scheme({canonical_basis_povm(2), pauli_povm(pauli_set(1)[0])}, 5);
  EXPECT_EQ(scheme.total_copies(), 5u);
  EXPECT_EQ(scheme.dim(), 2);
  EXPECT_EQ(scheme.max_outcomes(), 2);
  EXPECT_THROW(make_fixed_scheme({}, {}), std::invalid_argument);
  EXPECT_THROW(make_fixed_scheme({canonical_basis_povm(2), canonical_basis_povm(4)}, {1, 1}),
               std::invalid_argument);
}

}  // namespace
}  // namespace qcert
