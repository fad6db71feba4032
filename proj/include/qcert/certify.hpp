#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcert/haar_sampling.hpp"
#include "qcert/measurement.hpp"
#include "qcert/mub.hpp"
#include "qcert/rng.hpp"
#include "qcert/simulate.hpp"
#include "qcert/states.hpp"
#include "qcert/testers.hpp"

namespace qcert {

// End-to-end certifiers. Each consumes a copy oracle and a known rho_0 and
// returns YES (rho = rho_0) or NO (||rho - rho_0||_1 > eps). Fixed schemes
// declare their entire POVM sequence before the first measurement; only
// post-processing may use randomness.

struct CertifyOptions {
  ConstantsMode mode = ConstantsMode::kCalibrated;
  double identity_constant = 10.0;   // calibrated leading constant, TestIdentityL2
  double prod_bern_constant = 10.0;  // calibrated leading constant, TestProdBernL2
  bool truly_fixed = false;          // MUB certifiers: deterministic post-processing variant
  // explicit per-run copy count; overrides the mode formula (scaling studies)
  std::optional<std::size_t> sample_override;
};

struct GroupedPlan {
  std::size_t groups = 0;
  std::size_t group_size = 0;                 // n_0 (or L for the Pauli algorithm)
  std::size_t simulation_block = 0;           // M, only for the k<d algorithm
  std::vector<std::size_t> subsample_targets; // m_l
  std::vector<std::size_t> success_counts;    // n_l
};

struct CertResult {
  Verdict verdict = Verdict::kYes;
  std::size_t copies_consumed = 0;
  ConstantsMode mode = ConstantsMode::kCalibrated;
  std::map<std::string, double> diagnostics;
  std::optional<GroupedPlan> plan;
};

namespace detail {
inline TesterConfig identity_config(double eps, double delta, double b, const CertifyOptions& opts) {
  TesterConfig cfg;
  cfg.eps = eps;
  cfg.delta = delta;
  cfg.b = b;
  cfg.mode = opts.mode;
  cfg.calibrated_constant = opts.identity_constant;
  return cfg;
}

inline void require_budget(const CopyOracle& oracle, std::size_t needed, const char* who) {
  if (oracle.remaining() < needed)
    throw std::runtime_error(std::string(who) + ": insufficient copy budget (need " +
                             std::to_string(needed) + ", have " + std::to_string(oracle.remaining()) +
                             ")");
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Randomized k-outcome certification: Haar unitary -> rank-(d/k) projector
// POVM on every copy -> TestIdentityL2 with radius 0.07 eps / d, delta 0.01,
// b = 10/sqrt(k).
// ---------------------------------------------------------------------------

inline std::size_t randomized_k_budget(int dim, int k, double eps, const CertifyOptions& opts) {
  return detail::identity_config(0.07 * eps / dim, 0.01, 10.0 / std::sqrt(static_cast<double>(k)), opts)
      .required_samples();
}

inline CertResult certify_randomized_k(CopyOracle& oracle, const DensityMatrix& rho0, double eps,
                                       int k, Rng& rng, const CertifyOptions& opts = {}) {
  const int dim = oracle.dim();
  if (rho0.dim != dim) throw std::invalid_argument("certify_randomized_k: dimension mismatch");
  if (!is_power_of_two(k) || k < 2 || dim % k != 0)
    throw std::invalid_argument("certify_randomized_k: k must be a power of two >= 2 dividing d");

  const TesterConfig cfg =
      detail::identity_config(0.07 * eps / dim, 0.01, 10.0 / std::sqrt(static_cast<double>(k)), opts);
  const std::size_t budget =
      opts.sample_override.value_or(std::max<std::size_t>(cfg.required_samples(), 2 * cfg.batches()));
  detail::require_budget(oracle, budget, "certify_randomized_k");

  const ComplexMatrix u = sample_haar_unitary(dim, rng);
  const Povm povm = haar_projector_povm(u, k);
  const OutcomeDistribution reference = born_distribution(rho0, povm);
  const std::vector<int> outcomes = oracle.measure_many(povm, budget);

  CertResult result;
  result.verdict = test_identity_l2(reference.probs, outcomes, cfg);
  result.copies_consumed = budget;
  result.mode = opts.mode;
  result.diagnostics["n"] = static_cast<double>(budget);
  result.diagnostics["radius"] = cfg.eps;
  result.diagnostics["reference_l2"] = reference.l2_norm();
  result.diagnostics["statistic"] = identity_l2_statistic(reference.probs, outcomes);
  return result;
}

// ---------------------------------------------------------------------------
// Amplification wrapper: T independent runs, threshold vote at (t1+t2)/2.
// ---------------------------------------------------------------------------

inline CertResult certify_randomized_k_boosted(CopyOracle& oracle, const DensityMatrix& rho0,
                                               double eps, int k, int groups, Rng& rng,
                                               const CertifyOptions& opts = {}) {
  if (groups < 1) throw std::invalid_argument("certify_randomized_k_boosted: need at least one group");
  const std::size_t per_group =
      opts.sample_override.value_or(randomized_k_budget(oracle.dim(), k, eps, opts));
  detail::require_budget(oracle, per_group * static_cast<std::size_t>(groups),
                         "certify_randomized_k_boosted");

  std::vector<Verdict> votes;
  votes.reserve(groups);
  std::size_t copies = 0;
  for (int g = 0; g < groups; ++g) {
    const CertResult run = certify_randomized_k(oracle, rho0, eps, k, rng, opts);
    votes.push_back(run.verdict);
    copies += run.copies_consumed;
  }

  CertResult result;
  result.verdict = amplify_vote(votes);
  result.copies_consumed = copies;
  result.mode = opts.mode;
  result.diagnostics["groups"] = groups;
  result.diagnostics["no_votes"] =
      static_cast<double>(std::count(votes.begin(), votes.end(), Verdict::kNo));
  return result;
}

// ---------------------------------------------------------------------------
// Fixed Pauli certification: L groups, each measuring every Pauli observable
// once on a fresh copy; the bits of a group form one product-Bernoulli sample
// against q = pauli_probability_vector(rho_0) at radius eps/2.
// ---------------------------------------------------------------------------

inline std::size_t fixed_pauli_groups(int dim, double eps, const CertifyOptions& opts) {
  const std::size_t dims = static_cast<std::size_t>(dim) * dim - 1;
  return std::max<std::size_t>(prod_bern_sample_count(dims, eps / 2.0, opts.mode, opts.prod_bern_constant),
                               2);
}

inline std::size_t fixed_pauli_budget(int dim, double eps, const CertifyOptions& opts) {
  return fixed_pauli_groups(dim, eps, opts) * (static_cast<std::size_t>(dim) * dim - 1);
}

inline CertResult certify_fixed_pauli(CopyOracle& oracle, const DensityMatrix& rho0, double eps,
                                      const CertifyOptions& opts = {}) {
  const int dim = oracle.dim();
  if (rho0.dim != dim) throw std::invalid_argument("certify_fixed_pauli: dimension mismatch");
  const int qubits = log2_exact(dim);
  const std::size_t observables = static_cast<std::size_t>(dim) * dim - 1;

  const std::size_t groups = opts.sample_override
                                 ? std::max<std::size_t>(*opts.sample_override / observables, 2)
                                 : fixed_pauli_groups(dim, eps, opts);
  detail::require_budget(oracle, groups * observables, "certify_fixed_pauli");

  // whole scheme declared upfront: every Pauli POVM, groups copies each
  std::vector<Povm> povms;
  povms.reserve(observables);
  for (const ComplexMatrix& p : pauli_set(qubits)) povms.push_back(pauli_povm(p));
  const FixedScheme scheme = make_fixed_scheme(povms, std::vector<std::size_t>(observables, groups));

  // observable-major measurement order; bit 1 = "+1" outcome (label 2)
  std::vector<std::vector<int>> samples(groups, std::vector<int>(observables, 0));
  for (std::size_t obs = 0; obs < observables; ++obs) {
    const std::vector<int> outcomes = oracle.measure_many(scheme.povms[obs], groups);
    for (std::size_t g = 0; g < groups; ++g) samples[g][obs] = outcomes[g] == 2 ? 1 : 0;
  }

  const std::vector<double> reference = pauli_probability_vector(rho0);
  CertResult result;
  result.verdict = test_prod_bern_l2(reference, samples, eps / 2.0);
  result.copies_consumed = groups * observables;
  result.mode = opts.mode;
  result.diagnostics["groups"] = static_cast<double>(groups);
  result.diagnostics["statistic"] = prod_bern_statistic(reference, samples);
  GroupedPlan plan;
  plan.groups = groups;
  plan.group_size = observables;
  result.plan = plan;
  return result;
}

// ---------------------------------------------------------------------------
// Fixed MUB certification, k = d. The d+1 groups each measure one basis;
// multinomial counts from n/2 uniform draws over [d+1] truncate each group to
// min{n_0, m_l} (first outcomes kept), reducing to iid samples from the
// d(d+1)-outcome MUB law. Radius eps/((d+1) sqrt(d)), delta 1/6.
// ---------------------------------------------------------------------------

namespace detail {
inline TesterConfig mub_identity_config(int dim, double eps, const CertifyOptions& opts) {
  const double radius = eps / ((dim + 1) * std::sqrt(static_cast<double>(dim)));
  const double b = std::sqrt(2.0) / (dim + 1);
  return identity_config(radius, 1.0 / 6.0, b, opts);
}

inline std::vector<std::size_t> multinomial_counts(std::size_t draws, std::size_t cells, Rng& rng) {
  std::vector<std::size_t> counts(cells, 0);
  for (std::size_t i = 0; i < draws; ++i) ++counts[rng.below(cells)];
  return counts;
}
}  // namespace detail

inline std::size_t fixed_mub_d_budget(int dim, double eps, const CertifyOptions& opts) {
  const std::size_t need = detail::mub_identity_config(dim, eps, opts).required_samples();
  // kept samples concentrate near n/2; budget 2.5x the tester requirement
  const std::size_t groups = dim + 1;
  const std::size_t n0 = (5 * need / 2 + groups - 1) / groups + 1;
  return n0 * groups;
}

inline CertResult certify_fixed_mub_d(CopyOracle& oracle, const DensityMatrix& rho0, double eps,
                                      Rng& rng, const CertifyOptions& opts = {}) {
  const int dim = oracle.dim();
  if (rho0.dim != dim) throw std::invalid_argument("certify_fixed_mub_d: dimension mismatch");
  const MubFamily family = build_mub(log2_exact(dim));
  const std::size_t groups = family.bases.size();  // d + 1

  const std::size_t n0 = oracle.remaining() / groups;
  if (n0 < 2) throw std::runtime_error("certify_fixed_mub_d: insufficient copy budget");
  const std::size_t used = n0 * groups;  // excess copies deterministically discarded

  std::vector<Povm> basis_povms;
  basis_povms.reserve(groups);
  for (std::size_t l = 0; l < groups; ++l) basis_povms.push_back(mub_basis_povm(family, l));
  const FixedScheme scheme =
      make_fixed_scheme(basis_povms, std::vector<std::size_t>(groups, n0));

  std::vector<std::vector<int>> group_outcomes;
  group_outcomes.reserve(groups);
  for (std::size_t l = 0; l < groups; ++l)
    group_outcomes.push_back(oracle.measure_many(scheme.povms[l], n0));

  const TesterConfig cfg = detail::mub_identity_config(dim, eps, opts);
  const std::vector<double> reference = born_distribution(rho0, mub_povm(family)).probs;

  CertResult result;
  result.copies_consumed = used;
  result.mode = opts.mode;
  GroupedPlan plan;
  plan.groups = groups;
  plan.group_size = n0;

  if (opts.truly_fixed) {
    // deterministic post-processing: per-group l2 statistics summed against
    // the per-basis laws; far states satisfy sum_l ||p_l - q_l||^2 >= eps^2/d
    double total = 0.0;
    for (std::size_t l = 0; l < groups; ++l) {
      const std::vector<double> q_l = born_distribution(rho0, scheme.povms[l]).probs;
      total += identity_l2_statistic(q_l, group_outcomes[l]);
    }
    result.verdict = total > eps * eps / (2.0 * dim) ? Verdict::kNo : Verdict::kYes;
    result.diagnostics["statistic"] = total;
  } else {
    plan.subsample_targets = detail::multinomial_counts(used / 2, groups, rng);
    std::vector<int> combined;
    combined.reserve(used / 2);
    for (std::size_t l = 0; l < groups; ++l) {
      const std::size_t keep = std::min(n0, plan.subsample_targets[l]);
      for (std::size_t i = 0; i < keep; ++i)
        combined.push_back(static_cast<int>(l) * dim + group_outcomes[l][i]);
    }
    result.verdict = test_identity_l2(reference, combined, cfg);
    result.diagnostics["kept_samples"] = static_cast<double>(combined.size());
    result.diagnostics["statistic"] = identity_l2_statistic(reference, combined);
  }
  result.diagnostics["n0"] = static_cast<double>(n0);
  result.diagnostics["radius"] = cfg.eps;
  result.plan = std::move(plan);
  return result;
}

// ---------------------------------------------------------------------------
// Fixed MUB certification, k < d. Group outcomes are compressed through the
// log2(k)-bit simulation protocol in blocks of M players; successful
// simulations feed the same identity test as the k = d algorithm.
// ---------------------------------------------------------------------------

inline SimulationConfig mub_k_simulation_config(int dim, int k) {
  SimulationConfig cfg;
  cfg.domain = dim;
  cfg.bits = log2_exact(k);
  cfg.eta = 0.01;
  return cfg;
}

inline std::size_t fixed_mub_k_budget(int dim, int k, double eps, const CertifyOptions& opts) {
  const std::size_t need = detail::mub_identity_config(dim, eps, opts).required_samples();
  const std::size_t block = mub_k_simulation_config(dim, k).players();
  const std::size_t groups = dim + 1;
  const std::size_t blocks_per_group = (5 * need / 2 + groups - 1) / groups + 1;
  return blocks_per_group * block * groups;
}

inline CertResult certify_fixed_mub_k(CopyOracle& oracle, const DensityMatrix& rho0, double eps,
                                      int k, Rng& rng, const CertifyOptions& opts = {}) {
  const int dim = oracle.dim();
  if (rho0.dim != dim) throw std::invalid_argument("certify_fixed_mub_k: dimension mismatch");
  if (!is_power_of_two(k) || k < 2)
    throw std::invalid_argument("certify_fixed_mub_k: k must be a power of two >= 2");
  if (k >= dim)
    throw std::invalid_argument("certify_fixed_mub_k: k must be < d (use the k = d algorithm)");

  const MubFamily family = build_mub(log2_exact(dim));
  const std::size_t groups = family.bases.size();
  const SimulationConfig sim = mub_k_simulation_config(dim, k);
  const std::size_t block = sim.players();  // M

  const std::size_t n0 = oracle.remaining() / groups;
  const std::size_t blocks_per_group = n0 / block;
  if (blocks_per_group < 1) throw std::runtime_error("certify_fixed_mub_k: insufficient copy budget");
  const std::size_t used_per_group = blocks_per_group * block;
  const std::size_t used = used_per_group * groups;

  std::vector<Povm> basis_povms;
  basis_povms.reserve(groups);
  for (std::size_t l = 0; l < groups; ++l) basis_povms.push_back(mub_basis_povm(family, l));
  const FixedScheme scheme =
      make_fixed_scheme(basis_povms, std::vector<std::size_t>(groups, used_per_group));

  GroupedPlan plan;
  plan.groups = groups;
  plan.group_size = used_per_group;
  plan.simulation_block = block;
  plan.success_counts.resize(groups, 0);

  std::vector<std::vector<int>> simulated(groups);
  for (std::size_t l = 0; l < groups; ++l) {
    const std::vector<int> outcomes = oracle.measure_many(scheme.povms[l], used_per_group);
    for (std::size_t blk = 0; blk < blocks_per_group; ++blk) {
      const std::span<const int> players(outcomes.data() + blk * block, block);
      if (const auto value = eta_simulate(players, sim, rng)) simulated[l].push_back(*value);
    }
    plan.success_counts[l] = simulated[l].size();
  }

  const std::size_t uniform_draws = used / (2 * block);
  plan.subsample_targets = detail::multinomial_counts(uniform_draws, groups, rng);

  std::vector<int> combined;
  for (std::size_t l = 0; l < groups; ++l) {
    const std::size_t keep = std::min(simulated[l].size(), plan.subsample_targets[l]);
    for (std::size_t i = 0; i < keep; ++i)
      combined.push_back(static_cast<int>(l) * dim + simulated[l][i]);
  }

  const TesterConfig cfg = detail::mub_identity_config(dim, eps, opts);
  const std::vector<double> reference = born_distribution(rho0, mub_povm(family)).probs;

  CertResult result;
  result.verdict = test_identity_l2(reference, combined, cfg);
  result.copies_consumed = used;
  result.mode = opts.mode;
  result.diagnostics["n0"] = static_cast<double>(used_per_group);
  result.diagnostics["kept_samples"] = static_cast<double>(combined.size());
  result.diagnostics["simulation_block"] = static_cast<double>(block);
  result.diagnostics["radius"] = cfg.eps;
  result.plan = std::move(plan);
  return result;
}

// ---------------------------------------------------------------------------
// Baseline demonstrating the fixed-scheme failure mode: the canonical basis
// on every copy. Against states that match the null's outcome law (the "+"
// state), no post-processing can beat a coin flip.
// ---------------------------------------------------------------------------

inline std::size_t fixed_canonical_budget(int dim, double eps, const CertifyOptions& opts) {
  TesterConfig cfg = detail::identity_config(0.07 * eps / dim, 0.01,
                                             1.0 / std::sqrt(static_cast<double>(dim)), opts);
  return std::max<std::size_t>(cfg.required_samples(), 2 * cfg.batches());
}

inline CertResult certify_fixed_canonical_baseline(CopyOracle& oracle, const DensityMatrix& rho0,
                                                   double eps, const CertifyOptions& opts = {}) {
  const int dim = oracle.dim();
  if (rho0.dim != dim)
    throw std::invalid_argument("certify_fixed_canonical_baseline: dimension mismatch");
  const Povm povm = canonical_basis_povm(dim);
  const OutcomeDistribution reference = born_distribution(rho0, povm);
  TesterConfig cfg = detail::identity_config(0.07 * eps / dim, 0.01,
                                             std::max(reference.l2_norm(), 1e-6), opts);
  const std::size_t wanted = opts.sample_override.value_or(
      std::max<std::size_t>(cfg.required_samples(), 2 * cfg.batches()));
  const std::size_t budget = std::min(oracle.remaining(), wanted);
  const std::vector<int> outcomes = oracle.measure_many(povm, budget);

  CertResult result;
  result.verdict = test_identity_l2(reference.probs, outcomes, cfg);
  result.copies_consumed = budget;
  result.mode = opts.mode;
  result.diagnostics["n"] = static_cast<double>(budget);
  result.diagnostics["statistic"] = identity_l2_statistic(reference.probs, outcomes);
  return result;
}

}  // namespace qcert
