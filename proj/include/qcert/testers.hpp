#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qcert {

enum class Verdict { kYes, kNo };
enum class ConstantsMode { kPaper, kCalibrated };

inline const char* verdict_name(Verdict v) { return v == Verdict::kYes ? "YES" : "NO"; }
inline const char* mode_name(ConstantsMode m) {
  return m == ConstantsMode::kPaper ? "paper" : "calibrated";
}

// Identity tester under l2 distance. Sample size n = C b log(1/delta) / eps^2
// with C = 1000 in paper mode and the calibrated leading constant (default 10)
// otherwise. Paper mode amplifies a per-batch test by majority over
// ceil(18 ln(1/delta)) batches; the calibrated budget feeds a single batch.
struct TesterConfig {
  double eps = 0.1;
  double delta = 1.0 / 3.0;
  double b = 1.0;  // bound on min{||p||_2, ||q||_2}
  ConstantsMode mode = ConstantsMode::kCalibrated;
  double calibrated_constant = 10.0;

  double leading_constant() const {
    return mode == ConstantsMode::kPaper ? 1000.0 : calibrated_constant;
  }
  std::size_t required_samples() const {
    validate();
    return static_cast<std::size_t>(
        std::ceil(leading_constant() * b * std::log(1.0 / delta) / (eps * eps)));
  }
  std::size_t batches() const {
    if (mode == ConstantsMode::kPaper)
      return static_cast<std::size_t>(std::ceil(18.0 * std::log(1.0 / delta)));
    return 1;
  }
  void validate() const {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("tester: eps must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("tester: delta must lie in (0, 1)");
    if (!(b > 0.0)) throw std::invalid_argument("tester: b must be positive");
  }
};

// Unbiased multinomial estimate of ||p - q||_2^2 from counts:
// sum_x [N_x(N_x - 1) - 2(n-1) q_x N_x + n(n-1) q_x^2] / (n(n-1)).
// Expectation is exactly 0 at the null.
inline double identity_l2_statistic(const std::vector<double>& q, const std::vector<int>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("identity_l2_statistic: need at least 2 samples");
  const int k = static_cast<int>(q.size());
  std::vector<double> counts(q.size(), 0.0);
  for (int x : samples) {
    if (x < 1 || x > k) throw std::out_of_range("identity_l2_statistic: symbol outside [k]");
    counts[x - 1] += 1.0;
  }
  const double nn = static_cast<double>(n);
  double stat = 0.0;
  for (int x = 0; x < k; ++x) {
    const double c = counts[x];
    stat += c * (c - 1.0) - 2.0 * (nn - 1.0) * q[x] * c + nn * (nn - 1.0) * q[x] * q[x];
  }
  return stat / (nn * (nn - 1.0));
}

/// YES if p = q, NO if ||p - q||_2 > eps, each w.p. >= 1 - delta at the
/// configured sample size. Deterministic given the samples.
inline Verdict test_identity_l2(const std::vector<double>& q, const std::vector<int>& samples,
                                const TesterConfig& cfg) {
  cfg.validate();
  const std::size_t batches = cfg.batches();
  if (samples.size() < 2 * batches)
    throw std::invalid_argument("test_identity_l2: insufficient samples");
  const std::size_t per_batch = samples.size() / batches;
  std::size_t no_votes = 0;
  for (std::size_t bidx = 0; bidx < batches; ++bidx) {
    const std::vector<int> chunk(samples.begin() + bidx * per_batch,
                                 samples.begin() + (bidx + 1) * per_batch);
    if (identity_l2_statistic(q, chunk) > cfg.eps * cfg.eps / 2.0) ++no_votes;
  }
  return (2 * no_votes > batches) ? Verdict::kNo : Verdict::kYes;
}

// Product-Bernoulli l2 tester. Per-coordinate ones-counts W_i give the
// unbiased statistic Z = sum_i [(W_i - n q_i)^2 - W_i(n - W_i)/(n - 1)] with
// E[Z] = n^2 sum_i (p_i - q_i)^2; threshold n^2 eps^2 / 2.
inline double prod_bern_statistic(const std::vector<double>& q,
                                  const std::vector<std::vector<int>>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("prod_bern_statistic: need at least 2 samples");
  const std::size_t dims = q.size();
  std::vector<double> ones(dims, 0.0);
  for (const std::vector<int>& row : samples) {
    if (row.size() != dims) throw std::invalid_argument("prod_bern_statistic: sample width mismatch");
    for (std::size_t i = 0; i < dims; ++i) {
      if (row[i] != 0 && row[i] != 1)
        throw std::invalid_argument("prod_bern_statistic: samples must be 0/1");
      ones[i] += row[i];
    }
  }
  const double nn = static_cast<double>(n);
  double z = 0.0;
  for (std::size_t i = 0; i < dims; ++i) {
    const double w = ones[i];
    const double centered = w - nn * q[i];
    z += centered * centered - w * (nn - w) / (nn - 1.0);
  }
  return z / (nn * nn);  // estimate of ||p - q||_2^2
}

inline Verdict test_prod_bern_l2(const std::vector<double>& q,
                                 const std::vector<std::vector<int>>& samples, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("test_prod_bern_l2: eps must be positive");
  return prod_bern_statistic(q, samples) > eps * eps / 2.0 ? Verdict::kNo : Verdict::kYes;
}

inline std::size_t prod_bern_sample_count(std::size_t dims, double eps, ConstantsMode mode,
                                          double calibrated_constant = 10.0) {
  const double c = mode == ConstantsMode::kPaper ? 1000.0 : calibrated_constant;
  return static_cast<std::size_t>(std::ceil(c * std::sqrt(static_cast<double>(dims)) / (eps * eps)));
}

/// Threshold vote: NO iff the NO-fraction exceeds (t1 + t2)/2. Deterministic
/// and monotone in the NO count.
inline Verdict amplify_vote(const std::vector<Verdict>& results, double t1 = 0.03, double t2 = 0.1) {
  if (results.empty()) throw std::invalid_argument("amplify_vote: empty result sequence");
  std::size_t no_count = 0;
  for (Verdict v : results)
    if (v == Verdict::kNo) ++no_count;
  const double fraction = static_cast<double>(no_count) / static_cast<double>(results.size());
  return fraction > (t1 + t2) / 2.0 ? Verdict::kNo : Verdict::kYes;
}

/// Group count for the amplification wrapper at target failure alpha.
inline int amplification_group_count(double alpha, double t1 = 0.03, double t2 = 0.1) {
  return static_cast<int>(std::ceil(2.0 * std::log(1.0 / alpha) / ((t2 - t1) * (t2 - t1))));
}

}  // namespace qcert
