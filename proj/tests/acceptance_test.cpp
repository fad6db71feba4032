// Acceptance gate: every numbered criterion runs at its stated tolerance and
// prints one pass/fail line. The same criteria back the CLI `verify` command.

#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>

#include "qcert/verify.hpp"

namespace qcert {
namespace {

void run_criterion(int id) {
  const auto start = std::chrono::steady_clock::now();
  const verify::CriterionResult result = verify::run_criterion(id);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] criterion %2d: %s - %s (%.0f ms)\n", result.passed ? "PASS" : "FAIL",
              result.id, result.name.c_str(), result.detail.c_str(), ms);
  std::fflush(stdout);
  EXPECT_TRUE(result.passed) << "criterion " << id << ": " << result.detail;
}

TEST(Acceptance, C01_MicPropertySuite) { run_criterion(1); }
TEST(Acceptance, C02_ClosedFormNorms) { run_criterion(2); }
TEST(Acceptance, C03_ExactChiSquareIdentities) { run_criterion(3); }
TEST(Acceptance, C04_FoolingDemonstration) { run_criterion(4); }
TEST(Acceptance, C05_PauliIdentity) { run_criterion(5); }
TEST(Acceptance, C06_MubProperties) { run_criterion(6); }
TEST(Acceptance, C07_HaarMoments) { run_criterion(7); }
TEST(Acceptance, C08_DomainCompression) { run_criterion(8); }
TEST(Acceptance, C09_OperatorNormConcentration) { run_criterion(9); }
TEST(Acceptance, C10_HardInstanceValidity) { run_criterion(10); }
TEST(Acceptance, C11_EtaSimulation) { run_criterion(11); }
TEST(Acceptance, C12_EndToEndCertifiers) { run_criterion(12); }
TEST(Acceptance, C13_QualitativeScaling) { run_criterion(13); }
TEST(Acceptance, C14_TesterCalibration) { run_criterion(14); }

}  // namespace
}  // namespace qcert
