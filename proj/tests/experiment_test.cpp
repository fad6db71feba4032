#include "qcert/experiment.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "qcert/json_io.hpp"

namespace qcert {
namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.certifier = CertifierId::kFixedPauli;
  cfg.d = 2;
  cfg.k = 2;
  cfg.eps = 1.0;
  cfg.instance.kind = InstanceKind::kNull;
  cfg.trials = 40;
  cfg.seed = 515;
  return cfg;
}

TEST(RunTrial, DeterministicGivenConfigAndSeed) {
  const ExperimentConfig cfg = small_config();
  const std::uint64_t trial_seed = derive_seed(cfg.seed, 17);
  const TrialOutcome a = run_trial(cfg, trial_seed);
  const TrialOutcome b = run_trial(cfg, trial_seed);
  EXPECT_EQ(cert_result_to_json(a.result, trial_seed).dump(),
            cert_result_to_json(b.result, trial_seed).dump());
  EXPECT_EQ(a.success, b.success);
}

TEST(RunTrial, InstanceKindsAndExpectations) {
  ExperimentConfig cfg = small_config();
  cfg.certifier = CertifierId::kRandomizedK;
  cfg.d = 4;
  cfg.k = 4;

  cfg.instance.kind = InstanceKind::kNull;
  EXPECT_FALSE(run_trial(cfg, 1).expect_no);
  cfg.instance.kind = InstanceKind::kPlus;
  EXPECT_TRUE(run_trial(cfg, 2).expect_no);
  cfg.instance.kind = InstanceKind::kHard;
  cfg.eps = 0.004;
  cfg.n = 50;  // tiny eps would make the formula budget astronomical
  EXPECT_TRUE(run_trial(cfg, 3).expect_no);

  cfg.n = 0;
  cfg.instance.kind = InstanceKind::kExplicit;
  cfg.eps = 1.0;
  cfg.instance.state = plus_state(4);
  const TrialOutcome explicit_far = run_trial(cfg, 4);
  EXPECT_TRUE(explicit_far.expect_no);  // trace distance 1.5 > eps
  cfg.instance.state = maximally_mixed(4);
  EXPECT_FALSE(run_trial(cfg, 5).expect_no);
}

TEST(RunTrial, UnknownCertifierNameRejected) {
  EXPECT_THROW(certifier_from_name("does_not_exist"), std::invalid_argument);
  EXPECT_EQ(certifier_from_name("fixed_mub_k"), CertifierId::kFixedMubK);
}

TEST(EstimateSuccess, RatesAndDegenerateInterval) {
  const ExperimentRecord record = estimate_success(small_config());
  EXPECT_EQ(record.trial_seeds.size(), 40u);
  EXPECT_GE(record.rate, 2.0 / 3.0);
  EXPECT_LE(record.interval.lower, record.rate);
  EXPECT_GE(record.interval.upper, record.rate);

  ExperimentConfig one = small_config();
  one.trials = 1;
  const ExperimentRecord single = estimate_success(one);
  EXPECT_GT(single.interval.upper - single.interval.lower, 0.7);  // effectively uninformative
}

TEST(EstimateSuccess, ReproducibleExceptWallTime) {
  const ExperimentConfig cfg = small_config();
  ExperimentRecord a = estimate_success(cfg);
  ExperimentRecord b = estimate_success(cfg);
  a.wall_ms = b.wall_ms = 0.0;
  EXPECT_EQ(experiment_record_to_json(a).dump(), experiment_record_to_json(b).dump());
}

TEST(EstimateSuccess, WorkerPoolMergesDeterministically) {
  const ExperimentConfig cfg = small_config();
  ExperimentRecord sequential = estimate_success(cfg, 1);
  ExperimentRecord pooled = estimate_success(cfg, 4);
  sequential.wall_ms = pooled.wall_ms = 0.0;
  EXPECT_EQ(experiment_record_to_json(sequential).dump(),
            experiment_record_to_json(pooled).dump());
}

TEST(Sweep, CellErrorsRecordedAndOrderIndependent) {
  ExperimentConfig good = small_config();
  ExperimentConfig bad = small_config();
  bad.certifier = CertifierId::kFixedMubK;
  bad.d = 4;
  bad.k = 4;  // k = d rejected by the k<d algorithm

  const std::vector<SweepCell> cells = sweep({good, bad});
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_TRUE(cells[0].record.has_value());
  EXPECT_FALSE(cells[1].record.has_value());
  EXPECT_FALSE(cells[1].error.empty());

  const std::vector<SweepCell> swapped = sweep({bad, good});
  ASSERT_TRUE(swapped[1].record.has_value());
  EXPECT_EQ(swapped[1].record->successes, cells[0].record->successes);

  EXPECT_THROW(sweep({}), std::invalid_argument);
}

TEST(Sweep, CsvSchema) {
  EXPECT_EQ(csv_header(),
            "certifier,d,k,eps,n,mode,trials,successes,rate,wilson_lo,wilson_hi,seed,wall_ms");
  const ExperimentRecord record = estimate_success(small_config());
  const std::string row = csv_row(record);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 12);
  std::istringstream stream(row);
  std::string field;
  std::getline(stream, field, ',');
  EXPECT_EQ(field, "fixed_pauli");
}

TEST(Budgets, ResolveFormulaAndExplicit) {
  ExperimentConfig cfg = small_config();
  cfg.certifier = CertifierId::kRandomizedK;
  cfg.d = 4;
  cfg.k = 4;
  const std::size_t formula = resolve_budget(cfg);
  EXPECT_EQ(formula, randomized_k_budget(4, 4, 1.0, {}));
  cfg.n = 123;
  EXPECT_EQ(resolve_budget(cfg), 123u);
}

TEST(Config, Validation) {
  ExperimentConfig cfg = small_config();
  cfg.d = 3;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.eps = 2.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.trials = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace qcert
