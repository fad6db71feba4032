#include "qcert/json_io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "qcert/rng.hpp"

namespace qcert {
namespace {

TEST(PovmJson, RoundTripPreservesEffects) {
  Rng rng(71);
  const Povm povm = random_povm(4, 3, rng);
  const Povm back = povm_from_json(povm_to_json(povm));
  ASSERT_EQ(back.outcomes(), povm.outcomes());
  for (int x = 0; x < povm.outcomes(); ++x)
    EXPECT_LT((back.effects[x] - povm.effects[x]).norm(), 1e-12);
}

TEST(PovmJson, InvalidPovmRejectedWithNamedInvariant) {
  Json j;
  j["dim"] = 2;
  j["effects"] = Json::array();
  const ComplexMatrix identity = ComplexMatrix::Identity(2, 2);
  j["effects"].push_back(matrix_to_json(identity));
  j["effects"].push_back(matrix_to_json(identity));
  try {
    povm_from_json(j);
    FAIL() << "expected completeness violation";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("completeness"), std::string::npos);
  }
}

TEST(DensityJson, RoundTrip) {
  Rng rng(72);
  const DensityMatrix rho = random_density(4, rng);
  const DensityMatrix back = density_from_json(density_to_json(rho));
  EXPECT_LT((back.matrix - rho.matrix).norm(), 1e-12);
}

TEST(CertificateJson, FieldsPresent) {
  const LowerBoundCertificate cert = lower_bound_certificate({canonical_basis_povm(4)}, 0.1);
  const Json j = certificate_to_json(cert);
  EXPECT_NEAR(j.at("n_randomized").get<double>(), 800.0, 1e-6);
  EXPECT_NEAR(j.at("n_fixed").get<double>(), 1600.0, 1e-6);
  EXPECT_EQ(j.at("povm_count").get<std::size_t>(), 1u);
  EXPECT_EQ(j.at("constants").get<std::string>(), "order-only");
}

TEST(HardInstanceJson, ReplayIsExact) {
  Rng rng(73);
  const HardInstance inst =
      sample_perturbation(normalized_pauli_basis(2), 8, 0.01, 2.0, rng);
  const HardInstance replay = hard_instance_from_json(hard_instance_to_json(inst, 99));
  EXPECT_EQ(replay.signs, inst.signs);
  EXPECT_EQ((replay.sigma.matrix - inst.sigma.matrix).norm(), 0.0);
}

TEST(ExperimentConfigJson, ParsesKindsAndAuto) {
  Json j{{"certifier", "randomized_k"}, {"d", 4},     {"k", 4},
         {"eps", 1.0},                  {"n", "auto"}, {"instance", "plus"},
         {"trials", 10},                {"seed", 7},   {"mode", "calibrated"}};
  const ExperimentConfig cfg = experiment_config_from_json(j);
  EXPECT_EQ(cfg.certifier, CertifierId::kRandomizedK);
  EXPECT_EQ(cfg.n, 0u);  // auto
  EXPECT_EQ(cfg.instance.kind, InstanceKind::kPlus);
  EXPECT_EQ(cfg.mode, ConstantsMode::kCalibrated);

  Json hard = j;
  hard["instance"] = Json{{"hard", Json{{"ell", 8}, {"c", 2.0}}}};
  const ExperimentConfig hard_cfg = experiment_config_from_json(hard);
  EXPECT_EQ(hard_cfg.instance.kind, InstanceKind::kHard);
  EXPECT_EQ(hard_cfg.instance.ell, 8u);

  Json bad = j;
  bad["instance"] = "bogus";
  EXPECT_THROW(experiment_config_from_json(bad), std::invalid_argument);
}

TEST(ExperimentConfigJson, ExplicitStateFromFile) {
  const std::string path = testing::TempDir() + "qcert_state.json";
  {
    std::ofstream out(path);
    out << density_to_json(plus_state(4)).dump();
  }
  Json j{{"certifier", "fixed_pauli"}, {"d", 4}, {"eps", 1.0},
         {"instance", Json{{"file", path}}}, {"trials", 1}, {"seed", 1}};
  const ExperimentConfig cfg = experiment_config_from_json(j);
  EXPECT_EQ(cfg.instance.kind, InstanceKind::kExplicit);
  ASSERT_TRUE(cfg.instance.state.has_value());
  EXPECT_LT((cfg.instance.state->matrix - plus_state(4).matrix).norm(), 1e-12);
  std::remove(path.c_str());
}

TEST(CertResultJson, CarriesVerdictAndPlan) {
  Rng alg(74);
  CopyOracle oracle(maximally_mixed(2), fixed_pauli_budget(2, 1.0, {}), Rng(75));
  const CertResult result = certify_fixed_pauli(oracle, maximally_mixed(2), 1.0);
  const Json j = cert_result_to_json(result, 42);
  EXPECT_TRUE(j.at("verdict").is_string());
  EXPECT_EQ(j.at("mode").get<std::string>(), "calibrated");
  EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 42u);
  EXPECT_TRUE(j.contains("plan"));
}

}  // namespace
}  // namespace qcert
