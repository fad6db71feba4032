#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qcert/rng.hpp"

namespace qcert {

// eta-simulation of a d-ary distribution from players each sending at most
// ell bits. The domain splits into T = ceil(d/(2^ell - 1)) parts of size
// <= 2^ell - 1. Within an attempt, each of T players privately draws a
// uniform part index and transmits the within-part index of its sample if the
// sample lies in its part, else 0; the referee accepts iff exactly one player
// reported nonzero. Every value x is reported with probability p_x / T, so
// the conditional output law equals p exactly.
struct SimulationConfig {
  int domain = 2;   // d
  int bits = 1;     // ell
  double eta = 0.01;

  int part_size() const { return (1 << bits) - 1; }
  int parts() const { return (domain + part_size() - 1) / part_size(); }
  int attempts() const {
    return 40 * static_cast<int>(std::ceil(std::log2(1.0 / eta)));
  }
  std::size_t players() const {
    return static_cast<std::size_t>(attempts()) * static_cast<std::size_t>(parts());
  }
  void validate() const {
    if (domain < 1) throw std::invalid_argument("simulation: domain must be positive");
    if (bits < 1) throw std::invalid_argument("simulation: bit budget must be >= 1");
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("simulation: eta must lie in (0, 1)");
  }
};

/// Deterministic referee for one attempt, given the players' samples and
/// their drawn part indices (both 1-based). Returns the simulated value or
/// nullopt for bot.
inline std::optional<int> attempt_outcome(std::span<const int> samples, std::span<const int> parts,
                                          const SimulationConfig& cfg) {
  cfg.validate();
  const int t = cfg.parts();
  const int s = cfg.part_size();
  if (samples.size() != static_cast<std::size_t>(t) || parts.size() != samples.size())
    throw std::invalid_argument("attempt_outcome: need exactly T samples and T part indices");

  int winner_value = 0;
  int reports = 0;
  for (int j = 0; j < t; ++j) {
    const int sample = samples[j];
    const int part = parts[j];
    if (sample < 1 || sample > cfg.domain) throw std::out_of_range("attempt_outcome: sample outside [d]");
    if (part < 1 || part > t) throw std::out_of_range("attempt_outcome: part index outside [T]");
    const int lo = (part - 1) * s + 1;
    const int hi = std::min(part * s, cfg.domain);
    int message = 0;  // alphabet {0, .., 2^ell - 1}: fits the bit budget
    if (sample >= lo && sample <= hi) message = sample - lo + 1;
    if (message > s) throw std::logic_error("attempt_outcome: message exceeds the bit budget");
    if (message != 0) {
      ++reports;
      winner_value = lo + message - 1;
    }
  }
  if (reports != 1) return std::nullopt;
  return winner_value;
}

/// Run attempts in order over the player samples; first success wins. The
/// conditional law equals p exactly and the bot probability is at most eta.
inline std::optional<int> eta_simulate(std::span<const int> player_samples,
                                       const SimulationConfig& cfg, Rng& rng) {
  cfg.validate();
  const int t = cfg.parts();
  const int attempts = cfg.attempts();
  if (player_samples.size() < cfg.players())
    throw std::invalid_argument("eta_simulate: not enough player samples");
  std::vector<int> parts(t);
  for (int g = 0; g < attempts; ++g) {
    for (int j = 0; j < t; ++j) parts[j] = static_cast<int>(rng.below(t)) + 1;
    const auto outcome =
        attempt_outcome(player_samples.subspan(static_cast<std::size_t>(g) * t, t), parts, cfg);
    if (outcome) return outcome;
  }
  return std::nullopt;
}

}  // namespace qcert
