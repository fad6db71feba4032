#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace qcert {

// SplitMix64 finalizer. Used for counter-based seed derivation so that
// parallel trials get independent, replayable streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Per-trial seed = master seed combined with a counter index.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index));
}

// mt19937_64 with explicit uniform/gaussian mappings. std::*_distribution
// output is implementation-defined, so replays would not match across
// standard libraries; these mappings are fixed by hand instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (cosine branch).
  double gaussian() {
    double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// Complex standard normal: independent N(0, 1/2) parts, E|z|^2 = 1.
  std::complex<double> complex_gaussian() {
    constexpr double kInvSqrt2 = 0.7071067811865475244;
    return {gaussian() * kInvSqrt2, gaussian() * kInvSqrt2};
  }

  /// Unbiased uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Rademacher sign, +1 or -1.
  int sign() { return (engine_() >> 63) ? +1 : -1; }

 private:
  std::mt19937_64 engine_;
};

/// Inclusive-prefix CDF for categorical sampling.
inline std::vector<double> cumulative(const std::vector<double>& probs) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  if (!cdf.empty()) cdf.back() = 1.0;  // guard against rounding at the top
  return cdf;
}

/// Draw a 0-based index from a CDF built by cumulative().
inline std::size_t draw_from_cdf(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform();
  std::size_t lo = 0, hi = cdf.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (cdf[mid] > u) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace qcert
