#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qcert/chi_square.hpp"
#include "qcert/experiment.hpp"
#include "qcert/haar_moments.hpp"
#include "qcert/hard_instance.hpp"
#include "qcert/mic.hpp"
#include "qcert/mub.hpp"
#include "qcert/simulate.hpp"
#include "qcert/testers.hpp"

// Lemma-level invariant suites. Every numbered criterion is deterministic
// given its seed and prints its measured slack in the detail string.
namespace qcert::verify {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEEull;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {
class Check {
 public:
  explicit Check(int id, std::string name) : id_(id), name_(std::move(name)) {}
  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed_ = false;
      if (!failures_.empty()) failures_ += "; ";
      failures_ += what;
    }
  }
  void note(const std::string& text) { notes_ = notes_.empty() ? text : notes_ + "; " + text; }
  CriterionResult result() const {
    CriterionResult r{id_, name_, passed_, passed_ ? notes_ : failures_};
    return r;
  }

 private:
  int id_;
  std::string name_;
  bool passed_ = true;
  std::string failures_;
  std::string notes_;
};

inline std::string fmt(double x) {
  std::ostringstream out;
  out.precision(4);
  out << x;
  return out.str();
}
}  // namespace detail

// 1. MIC property suite over 200 random POVMs, d in {2,4,8,16}, k in {2..min(d,8)}.
inline CriterionResult criterion_mic_properties(std::uint64_t seed = kDefaultSeed) {
  detail::Check check(1, "MIC property suite (200 random POVMs)");
  Rng rng(derive_seed(seed, 1));
  const int dims[] = {2, 4, 8, 16};
  double worst_slack = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int d = dims[i % 4];
    const int kmax = std::min(d, 8);
    const int k = 2 + static_cast<int>(rng.below(kmax - 1));
    const Povm povm = random_povm(d, k, rng);
    const MicPropertyReport rep = mic_property_report(povm);
    check.require(rep.psd, "PSD floor violated at d=" + std::to_string(d));
    check.require(rep.unital, "unital residual " + detail::fmt(rep.unital_residual));
    check.require(rep.trace_preserving, "trace residual " + detail::fmt(rep.trace_residual));
    check.require(rep.hermiticity_preserving,
                  "hermiticity residual " + detail::fmt(rep.hermiticity_residual));
    check.require(rep.op_norm_bound, "op norm " + detail::fmt(rep.op_norm) + " > 1");
    check.require(rep.trace_norm_bound, "trace norm exceeds min(d,k) at d=" + std::to_string(d));
    check.require(rep.holder_chain, "||H||_HS^2 > ||H||_1");
    worst_slack = std::max(worst_slack, rep.hs_norm * rep.hs_norm - rep.trace_norm);
  }
  check.note("worst ||H||_HS^2 - ||H||_1 = " + detail::fmt(worst_slack));
  return check.result();
}

// 2. Closed-form norm cases: canonical d=4 -> (4, 2, 1); Pauli POVM -> (2, sqrt2, 1).
inline CriterionResult criterion_closed_norms(std::uint64_t = kDefaultSeed) {
  detail::Check check(2, "closed-form MIC norms");
  const MicPropertyReport canon = mic_property_report(canonical_basis_povm(4));
  check.require(std::abs(canon.trace_norm - 4.0) <= 1e-9, "canonical trace norm != 4");
  check.require(std::abs(canon.hs_norm - 2.0) <= 1e-9, "canonical HS norm != 2");
  check.require(std::abs(canon.op_norm - 1.0) <= 1e-9, "canonical op norm != 1");
  const MicPropertyReport pauli = mic_property_report(pauli_povm(pauli_set(2)[6]));
  check.require(std::abs(pauli.trace_norm - 2.0) <= 1e-9, "pauli trace norm != 2");
  check.require(std::abs(pauli.hs_norm - std::sqrt(2.0)) <= 1e-9, "pauli HS norm != sqrt(2)");
  check.require(std::abs(pauli.op_norm - 1.0) <= 1e-9, "pauli op norm != 1");
  check.note("canonical (" + detail::fmt(canon.trace_norm) + ", " + detail::fmt(canon.hs_norm) +
             ", " + detail::fmt(canon.op_norm) + ")");
  return check.result();
}

// 3. Exact chi-square identities for d=2, n <= 4, k <= 3, ell = 2.
inline CriterionResult criterion_chi_square_identities(std::uint64_t seed = kDefaultSeed) {
  detail::Check check(3, "exact chi-square identities (d=2, n<=4, k<=3)");
  Rng rng(derive_seed(seed, 3));
  const std::vector<ComplexMatrix> basis = normalized_pauli_basis(1);
  double worst_pollard = 0.0, worst_kernel = 0.0, worst_bound = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int k = 2; k <= 3; ++k) {
      std::vector<Povm> povms;
      for (std::size_t i = 0; i < n; ++i) povms.push_back(random_povm(2, k, rng));
      const FixedScheme scheme = make_fixed_scheme(povms, std::vector<std::size_t>(n, 1));

      const ChiSquareReport rep = decoupled_bound_check(scheme, basis, 2, 0.02, 10.0 * std::sqrt(2.0));
      worst_pollard = std::max(worst_pollard, rep.pollard_gap());
      worst_bound = std::max(worst_bound, rep.chi_square - rep.decoupled_bound);

      for (int probe = 0; probe < 5; ++probe) {
        const DensityMatrix s1 = random_density(2, rng);
        const DensityMatrix s2 = random_density(2, rng);
        for (const Povm& povm : povms)
          worst_kernel = std::max(worst_kernel, std::abs(mic_kernel(s1, s2, povm) -
                                                         mic_kernel_born(s1, s2, povm)));
      }
    }
  }
  check.require(worst_pollard <= 1e-9, "pollard relative gap " + detail::fmt(worst_pollard));
  check.require(worst_kernel <= 1e-10, "kernel dual-formula gap " + detail::fmt(worst_kernel));
  check.require(worst_bound <= 1e-9, "decoupled bound violated by " + detail::fmt(worst_bound));
  check.note("pollard gap " + detail::fmt(worst_pollard) + ", kernel gap " + detail::fmt(worst_kernel));
  return check.result();
}

// 4. Fooling demonstration: repeated canonical scheme vs the plus state (d=4).
inline CriterionResult criterion_fooling(std::uint64_t = kDefaultSeed) {
  detail::Check check(4, "fixed canonical scheme fooled by the plus state");
  const FixedScheme scheme = repeated_scheme(canonical_basis_povm(4), 4);
  const JointOutcomeLaw plus_law = enumerate_outcome_law(scheme, plus_state(4));
  const JointOutcomeLaw null_law = enumerate_outcome_law(scheme, maximally_mixed(4));
  const double tv = divergences(plus_law, null_law).tv;
  check.require(tv <= 1e-14, "joint law TV " + detail::fmt(tv));
  const ComplexMatrix gap = plus_state(4).matrix - maximally_mixed(4).matrix;
  const double image = mic_apply(mic_matrix(canonical_basis_povm(4)), gap).norm();
  check.require(image <= 1e-12, "H(plus - mixed) norm " + detail::fmt(image));
  check.note("TV = " + detail::fmt(tv) + ", kernel image norm = " + detail::fmt(image));
  return check.result();
}

// 5. Pauli identity ||p_rho - p_sigma||_2 = (sqrt d / 2) ||rho - sigma||_HS.
inline CriterionResult criterion_pauli_identity(std::uint64_t seed = kDefaultSeed) {
  detail::Check check(5, "Pauli probability-vector identity");
  Rng rng(derive_seed(seed, 5));
  double worst = 0.0;
  for (int qubits = 1; qubits <= 3; ++qubits) {
    const int d = 1 << qubits;
    for (int rep = 0; rep < 34; ++rep) {
      const DensityMatrix rho = random_density(d, rng);
      const DensityMatrix sigma = random_density(d, rng);
      const std::vector<double> pr = pauli_probability_vector(rho);
      const std::vector<double> ps = pauli_probability_vector(sigma);
      double dist_sq = 0.0;
      for (std::size_t i = 0; i < pr.size(); ++i) dist_sq += (pr[i] - ps[i]) * (pr[i] - ps[i]);
      const double expected = 0.5 * std::sqrt(static_cast<double>(d)) * hs_norm(rho.matrix - sigma.matrix);
      worst = std::max(worst, std::abs(std::sqrt(dist_sq) - expected));
    }
  }
  check.require(worst <= 1e-10, "identity gap " + detail::fmt(worst));
  check.note("worst gap " + detail::fmt(worst) + " over 102 pairs");
  return check.result();
}

// 6. MUB unbiasedness, 2-design residual, and the l2 outcome-law lemma.
inline CriterionResult criterion_mub(std::uint64_t seed = kDefaultSeed) {
  detail::Check check(6, "MUB unbiasedness / 2-design / outcome-law lemma");
  Rng rng(derive_seed(seed, 6));
  for (int qubits = 1; qubits <= 3; ++qubits) {
    const MubFamily family = build_mub(qubits);
    const int d = family.dim;
    double unbias = 0.0;
    for (std::size_t l = 0; l < family.bases.size(); ++l)
      for (std::size_t m = l + 1; m < family.bases.size(); ++m)
        for (int x = 0; x < d; ++x)
          for (int y = 0; y < d; ++y)
            unbias = std::max(unbias, std::abs(std::norm(family.bases[l].col(x).dot(
                                          family.bases[m].col(y))) -
                                      1.0 / d));
    check.require(unbias <= 1e-9, "unbiasedness gap " + detail::fmt(unbias));
    const double residual = two_design_check(mub_vectors(family));
    check.require(residual <= 1e-9, "2-design residual " + detail::fmt(residual));

    const Povm joint = mub_povm(family);
    for (int rep = 0; rep < 10; ++rep) {
      const DensityMatrix rho = random_density(d, rng);
      const DensityMatrix rho0 = random_density(d, rng);
      const OutcomeDistribution p = born_distribution(rho, joint);
      const OutcomeDistribution q = born_distribution(rho0, joint);
      check.require(p.l2_norm() <= std::sqrt(2.0) / (d + 1) + 1e-9, "||p_rho||_2 above sqrt(2)/(d+1)");
      double dist_sq = 0.0;
      for (std::size_t x = 0; x < p.probs.size(); ++x)
        dist_sq += (p.probs[x] - q.probs[x]) * (p.probs[x] - q.probs[x]);
      const double expected = hs_norm(rho.matrix - rho0.matrix) / (d + 1);
      check.require(std::abs(std::sqrt(dist_sq) - expected) <= 1e-9, "MUB l2 distance identity gap");
    }
  }
  check.note("all qubit counts 1..3");
  return check.result();
}

// 7. Haar moment Monte Carlo: first and second moments |z| <= 4 at 2e4
// samples (d in {4,8}); fourth moments below the closed bounds (d=8, k in {2,4}).
inline CriterionResult criterion_haar_moments(std::uint64_t seed = kDefaultSeed) {
  detail::Check check(7, "Haar moment Monte Carlo gates");
  Rng rng(derive_seed(seed, 7));
  const std::size_t samples = 20000;
  for (int d : {4, 8}) {
    const DensityMatrix a = random_density(d, rng);
    const DensityMatrix b = random_density(d, rng);
    const HaarSampleReport first = first_moment_check(a.matrix, b.matrix, samples, rng);
    check.require(std::abs(first.z_score) <= 4.0,
                  "first moment z = " + detail::fmt(first.z_score) + " at d=" + std::to_string(d));

    const int k = d / 2;
    const int rank = d / k;
    const ComplexMatrix m = random_density(d, rng).matrix;
    const double oracle = projector_second_moment_oracle(m, d, k);
    MeanAccumulator acc;
    for (std::size_t s = 0; s < samples; ++s) {
      const ComplexMatrix u = sample_haar_unitary(d, rng);
      const ComplexMatrix block = u.middleCols(0, rank);
      const double v = (block.adjoint() * m * block).trace().real();
      acc.add(v * v);
    }
    const double z = acc.std_error() > 0 ? (acc.mean() - oracle) / acc.std_error() : 0.0;
    check.require(std::abs(z) <= 4.0, "second moment z = " + detail::fmt(z) + " at d=" + std::to_string(d));
  }
  for (int k : {2, 4}) {
    ComplexMatrix delta = random_density(8, rng).matrix;
    delta -= (delta.trace().real() / 8.0) * ComplexMatrix::Identity(8, 8);
    const FourthMomentReport fourth = fourth_moment_bound_check(hermitian_part(delta), 8, k, samples, rng);
    check.require(fourth.pure_ok, "4th moment above bound at k=" + std::to_string(k));
    check.require(fourth.cross_ok, "cross 4th moment above bound at k=" + std::to_string(k));
  }
  check.note("2e4 samples per gate");
  return check.result();
}

// 8. Domain compression constants 0.98 / 0.13 at d=8, k in {2,4,8}.
inline CriterionResult criterion_domain_compression(std::uint64_t seed = kDefaultSeed) {
  detail::Check check(8, "domain compression event probabilities");
  Rng rng(derive_seed(seed, 8));
  const std::size_t samples = 2000;
  const DensityMatrix rho = plus_state(8);
  const DensityMatrix sigma = maximally_mixed(8);
  for (int k : {2, 4, 8}) {
    const CompressionReport rep = domain_compression_check(rho, sigma, k, samples, rng);
    const double se1 = std::sqrt(0.98 * 0.02 / samples);
    const double se2 = std::sqrt(0.13 * 0.87 / samples);
    check.require(rep.fraction_norm >= 0.98 - 3.0 * se1,
                  "norm fraction " + detail::fmt(rep.fraction_norm) + " at k=" + std::to_string(k));
    check.require(rep.fraction_distance >= 0.13 - 3.0 * se2,
                  "distance fraction " + detail::fmt(rep.fraction_distance) + " at k=" + std::to_string(k));
  }
  check.note("plus vs mixed at d=8");
  return check.result();
}

// 9. Operator-norm concentration: zero exceedances of 10 sqrt(d).
inline CriterionResult criterion_concentration(std::uint64_t seed = kDefaultSeed) {
  detail::Check check(9, "operator-norm concentration (kappa_1 = 10)");
  Rng rng(derive_seed(seed, 9));
  double ratio16 = 0.0, ratio64 = 0.0;
  for (int d : {16, 32, 64}) {
    const std::size_t ell = static_cast<std::size_t>(d) * d / 2;
    const ConcentrationReport rep = opnorm_concentration_experiment(d, ell, 500, rng);
    check.require(rep.exceedances == 0,
                  std::to_string(rep.exceedances) + " exceedances at d=" + std::to_string(d));
    if (d == 16) ratio16 = rep.max_ratio;
    if (d == 64) ratio64 = rep.max_ratio;
  }
  check.require(ratio64 <= ratio16 + 0.5, "max ratio grew from d=16 to d=64");
  check.note("max ratios: d=16 " + detail::fmt(ratio16) + ", d=64 " + detail::fmt(ratio64));
  return check.result();
}

// 10. Hard-instance validity: 1e4 draws at d=8, c = 10 sqrt(2), eps = 0.004.
inline CriterionResult criterion_hard_instances(std::uint64_t seed = kDefaultSeed) {
  detail::Check check(10, "hard-instance validity and far fraction");
  Rng rng(derive_seed(seed, 10));
  const std::vector<ComplexMatrix> basis = normalized_pauli_basis(3);
  const std::size_t draws = 10000;
  const double eps = 0.004;
  std::size_t far = 0;
  bool all_valid = true;
  for (std::size_t i = 0; i < draws; ++i) {
    const HardInstance inst = sample_perturbation(basis, 32, eps, 10.0 * std::sqrt(2.0), rng);
    const HardInstanceReport rep = validate_hard_instance(inst, eps);
    all_valid = all_valid && rep.sigma_valid;
    if (rep.far) ++far;
  }
  const double far_fraction = static_cast<double>(far) / draws;
  check.require(all_valid, "an instance failed density-matrix validity");
  check.require(far_fraction > 0.5, "far fraction " + detail::fmt(far_fraction));
  check.note("far fraction " + detail::fmt(far_fraction));
  return check.result();
}

// 11. eta-simulation: exact conditional law (enumeration, d=5, ell=2) and
// empirical bot rate <= eta over 1e5 runs.
inline CriterionResult criterion_simulation(std::uint64_t seed = kDefaultSeed) {
  detail::Check check(11, "eta-simulation exactness and bot rate");
  SimulationConfig cfg;
  cfg.domain = 5;
  cfg.bits = 2;
  cfg.eta = 0.01;
  const std::vector<double> p = {0.4, 0.3, 0.1, 0.1, 0.1};
  const int t = cfg.parts();

  // exhaustive enumeration over (sample, part) tuples of the T players;
  // each player carries weight p(sample) / T
  std::vector<double> conditional(cfg.domain, 0.0);
  double success_mass = 0.0;
  std::vector<int> samples(t), parts(t);
  std::function<void(int, double)> recurse = [&](int player, double weight) {
    if (player == t) {
      if (const auto outcome = attempt_outcome(samples, parts, cfg)) {
        conditional[*outcome - 1] += weight;
        success_mass += weight;
      }
      return;
    }
    for (int s = 1; s <= cfg.domain; ++s)
      for (int k = 1; k <= t; ++k) {
        samples[player] = s;
        parts[player] = k;
        recurse(player + 1, weight * p[s - 1] / t);
      }
  };
  recurse(0, 1.0);
  double worst = 0.0;
  for (int x = 0; x < cfg.domain; ++x)
    worst = std::max(worst, std::abs(conditional[x] / success_mass - p[x]));
  check.require(worst <= 1e-12, "conditional law gap " + detail::fmt(worst));
  const double per_attempt = std::pow(1.0 - 1.0 / t, t - 1);
  check.require(std::abs(success_mass - per_attempt) <= 1e-12, "per-attempt success mass mismatch");

  Rng rng(derive_seed(seed, 11));
  const std::vector<double> cdf = cumulative(p);
  std::size_t bot = 0;
  const std::size_t runs = 100000;
  std::vector<int> players(cfg.players());
  for (std::size_t r = 0; r < runs; ++r) {
    for (int& s : players) s = static_cast<int>(draw_from_cdf(cdf, rng)) + 1;
    if (!eta_simulate(players, cfg, rng)) ++bot;
  }
  const double bot_rate = static_cast<double>(bot) / runs;
  check.require(bot_rate <= cfg.eta, "bot rate " + detail::fmt(bot_rate));
  check.note("conditional gap " + detail::fmt(worst) + ", bot rate " + detail::fmt(bot_rate) +
             ", M = " + std::to_string(cfg.players()));
  return check.result();
}

namespace detail {
inline ExperimentConfig end_to_end_config(CertifierId id, InstanceKind kind, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.certifier = id;
  cfg.d = 4;
  cfg.k = id == CertifierId::kFixedMubK ? 2 : 4;
  cfg.eps = 1.0;
  cfg.instance.kind = kind;
  cfg.trials = 200;
  cfg.seed = seed;
  cfg.boost_groups = 5;
  return cfg;
}
}  // namespace detail

// 12. End-to-end certifiers at d=4, calibrated mode: Wilson lower bound >= 0.6
// on the null and on the plus instance, 200 trials each.
inline CriterionResult criterion_end_to_end(std::uint64_t seed = kDefaultSeed) {
  detail::Check check(12, "end-to-end certifiers (calibrated, d=4)");
  const CertifierId ids[] = {CertifierId::kRandomizedK, CertifierId::kRandomizedKBoosted,
                             CertifierId::kFixedPauli, CertifierId::kFixedMubD,
                             CertifierId::kFixedMubK};
  for (CertifierId id : ids) {
    for (InstanceKind kind : {InstanceKind::kNull, InstanceKind::kPlus}) {
      const ExperimentRecord rec =
          estimate_success(detail::end_to_end_config(id, kind, derive_seed(seed, 12)));
      const std::string label = std::string(certifier_name(id)) +
                                (kind == InstanceKind::kNull ? "/null" : "/plus");
      check.require(rec.interval.lower >= 0.6,
                    label + " Wilson lower " + detail::fmt(rec.interval.lower));
    }
  }
  check.note("all five certifiers, both instances, 200 trials each");
  return check.result();
}

// 13. Qualitative scaling: success non-decreasing in n and in k (2 SE slack);
// the fixed canonical baseline stays on the coin-flip line at every n.
inline CriterionResult criterion_scaling(std::uint64_t seed = kDefaultSeed) {
  detail::Check check(13, "qualitative scaling and the fixed-scheme baseline");
  const std::size_t trials = 200;
  auto two_se = [trials](double r1, double r2) {
    const double v1 = r1 * (1.0 - r1) / trials, v2 = r2 * (1.0 - r2) / trials;
    return 2.0 * std::sqrt(v1 + v2);
  };

  std::vector<double> n_rates;
  for (std::size_t n : {8, 24, 72, 216}) {
    ExperimentConfig cfg;
    cfg.certifier = CertifierId::kRandomizedK;
    cfg.d = 4;
    cfg.k = 4;
    cfg.eps = 1.0;
    cfg.n = n;
    cfg.instance.kind = InstanceKind::kPlus;
    cfg.trials = trials;
    cfg.seed = derive_seed(seed, 130 + n);
    n_rates.push_back(estimate_success(cfg).rate);
  }
  for (std::size_t i = 0; i + 1 < n_rates.size(); ++i)
    check.require(n_rates[i + 1] >= n_rates[i] - two_se(n_rates[i], n_rates[i + 1]),
                  "success decreased on the n grid");

  std::vector<double> k_rates;
  for (int k : {2, 4, 8, 16}) {
    ExperimentConfig cfg;
    cfg.certifier = CertifierId::kRandomizedK;
    cfg.d = 16;
    cfg.k = k;
    cfg.eps = 1.0;
    cfg.n = 48;
    cfg.instance.kind = InstanceKind::kPlus;
    cfg.trials = trials;
    cfg.seed = derive_seed(seed, 140 + k);
    k_rates.push_back(estimate_success(cfg).rate);
  }
  for (std::size_t i = 0; i + 1 < k_rates.size(); ++i)
    check.require(k_rates[i + 1] >= k_rates[i] - two_se(k_rates[i], k_rates[i + 1]),
                  "success decreased on the k grid");

  for (std::size_t n : {8, 24, 72, 216}) {
    ExperimentConfig cfg;
    cfg.certifier = CertifierId::kFixedCanonicalBaseline;
    cfg.d = 4;
    cfg.k = 4;
    cfg.eps = 1.0;
    cfg.n = n;
    cfg.instance.kind = InstanceKind::kCoinPlus;
    cfg.trials = trials;
    cfg.seed = derive_seed(seed, 150 + n);
    const ExperimentRecord rec = estimate_success(cfg);
    check.require(rec.interval.lower <= 0.5 && 0.5 <= rec.interval.upper,
                  "baseline interval excludes 1/2 at n=" + std::to_string(n));
  }

  std::ostringstream note;
  note << "n-grid rates";
  for (double r : n_rates) note << ' ' << detail::fmt(r);
  note << "; k-grid rates";
  for (double r : k_rates) note << ' ' << detail::fmt(r);
  check.note(note.str());
  return check.result();
}

// 14. Classical tester calibration: empirical type-I/II <= delta at the
// calibrated sample sizes, 1000 runs (k=16, D=15).
inline CriterionResult criterion_tester_calibration(std::uint64_t seed = kDefaultSeed) {
  detail::Check check(14, "classical tester calibration");
  Rng rng(derive_seed(seed, 14));
  const std::size_t runs = 1000;

  {  // identity tester over [16]
    TesterConfig cfg;
    cfg.eps = 0.1;
    cfg.delta = 1.0 / 6.0;
    cfg.b = 0.25;  // ||uniform(16)||_2
    const std::vector<double> q(16, 1.0 / 16.0);
    std::vector<double> far(16);
    for (int x = 0; x < 16; ++x) far[x] = 1.0 / 16.0 + ((x % 2) ? -0.05 : 0.05);  // ||p-q|| = 2 eps
    const std::size_t n = cfg.required_samples();
    const std::vector<double> q_cdf = cumulative(q), far_cdf = cumulative(far);
    std::size_t type1 = 0, type2 = 0;
    std::vector<int> samples(n);
    for (std::size_t r = 0; r < runs; ++r) {
      for (int& s : samples) s = static_cast<int>(draw_from_cdf(q_cdf, rng)) + 1;
      if (test_identity_l2(q, samples, cfg) == Verdict::kNo) ++type1;
      for (int& s : samples) s = static_cast<int>(draw_from_cdf(far_cdf, rng)) + 1;
      if (test_identity_l2(q, samples, cfg) == Verdict::kYes) ++type2;
    }
    const double e1 = static_cast<double>(type1) / runs, e2 = static_cast<double>(type2) / runs;
    check.require(e1 <= cfg.delta, "identity type-I " + detail::fmt(e1));
    check.require(e2 <= cfg.delta, "identity type-II " + detail::fmt(e2));
    check.note("identity n=" + std::to_string(n) + " errors " + detail::fmt(e1) + "/" + detail::fmt(e2));
  }

  {  // product-Bernoulli tester, D = 15
    const double eps = 0.2;
    const std::size_t dims = 15;
    const std::vector<double> q(dims, 0.5);
    std::vector<double> far(dims);
    const double bump = 2.0 * eps / std::sqrt(static_cast<double>(dims));
    for (std::size_t i = 0; i < dims; ++i) far[i] = 0.5 + ((i % 2) ? -bump : bump);
    const std::size_t n = prod_bern_sample_count(dims, eps, ConstantsMode::kCalibrated);
    std::size_t type1 = 0, type2 = 0;
    std::vector<std::vector<int>> samples(n, std::vector<int>(dims));
    auto draw_rows = [&](const std::vector<double>& p) {
      for (auto& row : samples)
        for (std::size_t i = 0; i < dims; ++i) row[i] = rng.uniform() < p[i] ? 1 : 0;
    };
    for (std::size_t r = 0; r < runs; ++r) {
      draw_rows(q);
      if (test_prod_bern_l2(q, samples, eps) == Verdict::kNo) ++type1;
      draw_rows(far);
      if (test_prod_bern_l2(q, samples, eps) == Verdict::kYes) ++type2;
    }
    const double e1 = static_cast<double>(type1) / runs, e2 = static_cast<double>(type2) / runs;
    check.require(e1 <= 1.0 / 3.0, "prod-bern type-I " + detail::fmt(e1));
    check.require(e2 <= 1.0 / 3.0, "prod-bern type-II " + detail::fmt(e2));
  }
  return check.result();
}

// ---------------------------------------------------------------------------

inline std::vector<int> suite_criteria(const std::string& selector) {
  static const std::map<std::string, std::vector<int>> suites = {
      {"mic", {1, 2}},         {"chi2", {3, 4}},       {"pauli", {5}},
      {"mub", {6}},            {"haar", {7}},          {"compression", {8}},
      {"concentration", {9}},  {"hard", {10}},         {"simulate", {11}},
      {"certifiers", {12}},    {"scaling", {13}},      {"testers", {14}},
      {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14}},
  };
  const auto it = suites.find(selector);
  if (it == suites.end()) throw std::invalid_argument("unknown suite selector: " + selector);
  return it->second;
}

inline CriterionResult run_criterion(int id, std::uint64_t seed = kDefaultSeed) {
  switch (id) {
    case 1: return criterion_mic_properties(seed);
    case 2: return criterion_closed_norms(seed);
    case 3: return criterion_chi_square_identities(seed);
    case 4: return criterion_fooling(seed);
    case 5: return criterion_pauli_identity(seed);
    case 6: return criterion_mub(seed);
    case 7: return criterion_haar_moments(seed);
    case 8: return criterion_domain_compression(seed);
    case 9: return criterion_concentration(seed);
    case 10: return criterion_hard_instances(seed);
    case 11: return criterion_simulation(seed);
    case 12: return criterion_end_to_end(seed);
    case 13: return criterion_scaling(seed);
    case 14: return criterion_tester_calibration(seed);
    default: throw std::invalid_argument("unknown criterion id");
  }
}

inline std::vector<CriterionResult> run_suite(const std::string& selector,
                                              std::uint64_t seed = kDefaultSeed) {
  std::vector<CriterionResult> results;
  for (int id : suite_criteria(selector)) results.push_back(run_criterion(id, seed));
  return results;
}

}  // namespace qcert::verify
