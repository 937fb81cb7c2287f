#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "egactive/rng.hpp"

namespace egactive {

/// Exponentiated-gradient selection over a finite grid of epsilon values.
struct EGConfig {
  std::vector<double> candidates = default_grid();
  double tau = 0.1;
  double beta = 0.01;
  /// Mixing weight of the uniform floor (kappa / T per arm).
  double kappa = 0.1;
  std::size_t iterations = 2000;
  /// Use p_k = (1 - kappa)(w_k / sum w + kappa / T), renormalised, instead of
  /// the exponentially-weighted-forecaster mixture. For comparison only.
  bool literal_smoothing = false;

  /// {0.0, 0.1, ..., 1.0}
  static std::vector<double> default_grid();
  /// Distinctness is a configuration rule; the update itself is well defined
  /// for repeated candidates.
  void validate(bool require_distinct = true) const;
  std::size_t arms() const { return candidates.size(); }
};

struct EGState {
  std::vector<double> weights;
  std::vector<double> probs;
  std::size_t t = 0;
  std::vector<std::size_t> arm_pulls;
};

EGState init_eg(const EGConfig& config);

/// Inverse-CDF draw over `state.probs` in candidate order. Does not touch
/// the pull counters; update_eg records the pull.
std::size_t sample_arm(const EGState& state, Rng& rng);

/// Smoothed probabilities for a weight vector. Invariant under w -> c * w.
std::vector<double> probabilities_from_weights(std::span<const double> weights,
                                               const EGConfig& config);

/// w_k <- w_k * exp(tau * (r * [k == d] + beta) / p_k) with the pre-update p,
/// then p from the new weights, then w rescaled so max w = 1.
EGState update_eg(const EGState& state, std::size_t arm, double reward, const EGConfig& config);

}  // namespace egactive
