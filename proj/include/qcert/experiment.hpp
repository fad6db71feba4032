#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qcert/certify.hpp"
#include "qcert/hard_instance.hpp"
#include "qcert/measurement.hpp"
#include "qcert/rng.hpp"
#include "qcert/states.hpp"
#include "qcert/stats.hpp"

namespace qcert {

enum class CertifierId {
  kRandomizedK,
  kRandomizedKBoosted,
  kFixedPauli,
  kFixedMubD,
  kFixedMubK,
  kFixedCanonicalBaseline,
};

inline const char* certifier_name(CertifierId id) {
  switch (id) {
    case CertifierId::kRandomizedK: return "randomized_k";
    case CertifierId::kRandomizedKBoosted: return "randomized_k_boosted";
    case CertifierId::kFixedPauli: return "fixed_pauli";
    case CertifierId::kFixedMubD: return "fixed_mub_d";
    case CertifierId::kFixedMubK: return "fixed_mub_k";
    case CertifierId::kFixedCanonicalBaseline: return "fixed_canonical_baseline";
  }
  throw std::invalid_argument("unknown certifier id");
}

inline CertifierId certifier_from_name(const std::string& name) {
  if (name == "randomized_k") return CertifierId::kRandomizedK;
  if (name == "randomized_k_boosted") return CertifierId::kRandomizedKBoosted;
  if (name == "fixed_pauli") return CertifierId::kFixedPauli;
  if (name == "fixed_mub_d") return CertifierId::kFixedMubD;
  if (name == "fixed_mub_k") return CertifierId::kFixedMubK;
  if (name == "fixed_canonical_baseline") return CertifierId::kFixedCanonicalBaseline;
  throw std::invalid_argument("unknown certifier id: " + name);
}

enum class InstanceKind { kNull, kPlus, kCoinPlus, kHard, kExplicit };

struct InstanceSpec {
  InstanceKind kind = InstanceKind::kNull;
  // hard-instance parameters (kind == kHard)
  std::size_t ell = 0;  // 0 means the default d^2/2
  double c = 14.142135623730951;  // 10 sqrt(2)
  // explicit state (kind == kExplicit, loaded from file by the CLI)
  std::optional<DensityMatrix> state;
};

struct ExperimentConfig {
  CertifierId certifier = CertifierId::kRandomizedK;
  int d = 2;
  int k = 2;
  double eps = 1.0;
  std::size_t n = 0;     // 0 = auto (formula for the configured mode)
  InstanceSpec instance;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  ConstantsMode mode = ConstantsMode::kCalibrated;
  int boost_groups = 5;  // T for the amplification wrapper
  bool truly_fixed = false;

  void validate() const {
    if (!is_power_of_two(d)) throw std::invalid_argument("config: d must be a power of two");
    if (!is_power_of_two(k)) throw std::invalid_argument("config: k must be a power of two");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (!(eps > 0.0 && eps <= 2.0)) throw std::invalid_argument("config: eps must lie in (0, 2]");
  }
};

struct TrialOutcome {
  CertResult result;
  bool expect_no = false;
  bool success = false;
  std::uint64_t seed = 0;
};

namespace detail {
// instance stream 1, oracle stream 2, algorithm stream 3
inline Rng trial_stream(std::uint64_t trial_seed, std::uint64_t lane) {
  return Rng(derive_seed(trial_seed, lane));
}
}  // namespace detail

/// Budget for one trial: explicit n, or the mode formula.
inline std::size_t resolve_budget(const ExperimentConfig& cfg) {
  if (cfg.n > 0) return cfg.n;
  CertifyOptions opts;
  opts.mode = cfg.mode;
  switch (cfg.certifier) {
    case CertifierId::kRandomizedK: return randomized_k_budget(cfg.d, cfg.k, cfg.eps, opts);
    case CertifierId::kRandomizedKBoosted:
      return randomized_k_budget(cfg.d, cfg.k, cfg.eps, opts) * cfg.boost_groups;
    case CertifierId::kFixedPauli: return fixed_pauli_budget(cfg.d, cfg.eps, opts);
    case CertifierId::kFixedMubD: return fixed_mub_d_budget(cfg.d, cfg.eps, opts);
    case CertifierId::kFixedMubK: return fixed_mub_k_budget(cfg.d, cfg.k, cfg.eps, opts);
    case CertifierId::kFixedCanonicalBaseline: return fixed_canonical_budget(cfg.d, cfg.eps, opts);
  }
  throw std::invalid_argument("unknown certifier id");
}

/// One deterministic trial: (config, trial seed) fixes the instance, the
/// oracle stream, and the algorithm stream.
inline TrialOutcome run_trial(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
  cfg.validate();
  Rng instance_rng = detail::trial_stream(trial_seed, 1);
  Rng oracle_rng = detail::trial_stream(trial_seed, 2);
  Rng algorithm_rng = detail::trial_stream(trial_seed, 3);

  const DensityMatrix rho0 = maximally_mixed(cfg.d);
  DensityMatrix rho = rho0;
  bool expect_no = false;
  switch (cfg.instance.kind) {
    case InstanceKind::kNull:
      break;
    case InstanceKind::kPlus:
      rho = plus_state(cfg.d);
      expect_no = true;
      break;
    case InstanceKind::kCoinPlus:
      if (instance_rng.uniform() < 0.5) {
        rho = plus_state(cfg.d);
        expect_no = true;
      }
      break;
    case InstanceKind::kHard: {
      const std::size_t ell =
          cfg.instance.ell ? cfg.instance.ell : static_cast<std::size_t>(cfg.d) * cfg.d / 2;
      const HardInstance inst = sample_perturbation(normalized_pauli_basis(log2_exact(cfg.d)), ell,
                                                    cfg.eps, cfg.instance.c, instance_rng);
      rho = inst.sigma;
      expect_no = true;
      break;
    }
    case InstanceKind::kExplicit:
      if (!cfg.instance.state) throw std::invalid_argument("config: explicit instance without a state");
      rho = *cfg.instance.state;
      expect_no = trace_distance_norm(rho, rho0) > cfg.eps;
      break;
  }

  CertifyOptions opts;
  opts.mode = cfg.mode;
  opts.truly_fixed = cfg.truly_fixed;
  if (cfg.n > 0 && cfg.certifier != CertifierId::kFixedMubD && cfg.certifier != CertifierId::kFixedMubK) {
    std::size_t per_run = cfg.n;
    if (cfg.certifier == CertifierId::kRandomizedKBoosted)
      per_run = std::max<std::size_t>(cfg.n / cfg.boost_groups, 2);
    opts.sample_override = per_run;
  }

  CopyOracle oracle(rho, resolve_budget(cfg), std::move(oracle_rng));

  TrialOutcome outcome;
  outcome.seed = trial_seed;
  outcome.expect_no = expect_no;
  switch (cfg.certifier) {
    case CertifierId::kRandomizedK:
      outcome.result = certify_randomized_k(oracle, rho0, cfg.eps, cfg.k, algorithm_rng, opts);
      break;
    case CertifierId::kRandomizedKBoosted:
      outcome.result = certify_randomized_k_boosted(oracle, rho0, cfg.eps, cfg.k, cfg.boost_groups,
                                                    algorithm_rng, opts);
      break;
    case CertifierId::kFixedPauli:
      outcome.result = certify_fixed_pauli(oracle, rho0, cfg.eps, opts);
      break;
    case CertifierId::kFixedMubD:
      outcome.result = certify_fixed_mub_d(oracle, rho0, cfg.eps, algorithm_rng, opts);
      break;
    case CertifierId::kFixedMubK:
      outcome.result = certify_fixed_mub_k(oracle, rho0, cfg.eps, cfg.k, algorithm_rng, opts);
      break;
    case CertifierId::kFixedCanonicalBaseline:
      outcome.result = certify_fixed_canonical_baseline(oracle, rho0, cfg.eps, opts);
      break;
  }
  outcome.success = (outcome.result.verdict == Verdict::kNo) == expect_no;
  return outcome;
}

struct ExperimentRecord {
  ExperimentConfig config;
  std::size_t resolved_n = 0;
  std::size_t successes = 0;
  double rate = 0.0;
  WilsonInterval interval;
  double wall_ms = 0.0;  // informational; excluded from reproducibility guarantees
  std::vector<std::uint64_t> trial_seeds;
};

/// Monte Carlo success estimate with a Wilson 95% interval. Per-trial seeds
/// derive from the master seed by counter; trials may run on worker threads
/// (worker_count 0 = hardware concurrency) and merge deterministically by
/// trial index.
inline ExperimentRecord estimate_success(const ExperimentConfig& cfg, unsigned worker_count = 0) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  ExperimentRecord record;
  record.config = cfg;
  record.resolved_n = resolve_budget(cfg);
  record.trial_seeds.resize(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) record.trial_seeds[t] = derive_seed(cfg.seed, t);

  std::vector<char> success(cfg.trials, 0);
  if (worker_count == 0) worker_count = std::thread::hardware_concurrency();
  const unsigned workers = std::min<unsigned>(worker_count, static_cast<unsigned>(cfg.trials));
  if (workers > 1) {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        for (std::size_t t = next.fetch_add(1); t < cfg.trials; t = next.fetch_add(1))
          success[t] = run_trial(cfg, record.trial_seeds[t]).success ? 1 : 0;
      });
    for (std::thread& th : pool) th.join();
  } else {
    for (std::size_t t = 0; t < cfg.trials; ++t)
      success[t] = run_trial(cfg, record.trial_seeds[t]).success ? 1 : 0;
  }

  for (char s : success) record.successes += s;
  record.rate = static_cast<double>(record.successes) / static_cast<double>(cfg.trials);
  record.interval = wilson_interval(record.successes, cfg.trials);
  record.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                       .count();
  return record;
}

struct SweepCell {
  std::optional<ExperimentRecord> record;
  std::string error;
};

/// Run every config; a failing cell records its error and the sweep continues.
inline std::vector<SweepCell> sweep(const std::vector<ExperimentConfig>& grid) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  std::vector<SweepCell> cells(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      cells[i].record = estimate_success(grid[i]);
    } catch (const std::exception& e) {
      cells[i].error = e.what();
    }
  }
  return cells;
}

inline std::string csv_header() {
  return "certifier,d,k,eps,n,mode,trials,successes,rate,wilson_lo,wilson_hi,seed,wall_ms";
}

inline std::string csv_row(const ExperimentRecord& r) {
  std::ostringstream out;
  out << certifier_name(r.config.certifier) << ',' << r.config.d << ',' << r.config.k << ','
      << r.config.eps << ',' << r.resolved_n << ',' << mode_name(r.config.mode) << ','
      << r.config.trials << ',' << r.successes << ',' << r.rate << ',' << r.interval.lower << ','
      << r.interval.upper << ',' << r.config.seed << ',' << static_cast<long long>(r.wall_ms);
  return out.str();
}

}  // namespace qcert
