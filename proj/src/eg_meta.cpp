#include "egactive/eg_meta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "egactive/error.hpp"

namespace egactive {
namespace {

// Weights are kept within exp(-700) of the largest one so they stay normal,
// positive doubles however lopsided the arms become.
constexpr double kMinLogWeightRatio = -700.0;

}  // namespace

std::vector<double> EGConfig::default_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
  return grid;
}

void EGConfig::validate(bool require_distinct) const {
  if (candidates.size() < 2) throw ValidationError("eg.candidates needs at least 2 values");
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!(candidates[i] >= 0.0 && candidates[i] <= 1.0)) {
      throw ValidationError("eg.candidates values must lie in [0, 1]");
    }
    for (std::size_t j = 0; require_distinct && j < i; ++j) {
      if (candidates[i] == candidates[j]) {
        throw ValidationError("eg.candidates must be distinct");
      }
    }
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("eg.tau must be positive");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("eg.beta must be non-negative");
  if (!(kappa >= 0.0 && kappa < 1.0)) throw ValidationError("eg.kappa must lie in [0, 1)");
  if (iterations == 0) throw ValidationError("eg.iterations must be positive");
}

EGState init_eg(const EGConfig& config) {
  config.validate(false);
  const std::size_t arms = config.arms();
  EGState state;
  state.weights.assign(arms, 1.0);
  state.probs.assign(arms, 1.0 / static_cast<double>(arms));
  state.arm_pulls.assign(arms, 0);
  return state;
}

std::size_t sample_arm(const EGState& state, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t k = 0; k < state.probs.size(); ++k) {
    cumulative += state.probs[k];
    if (u < cumulative) return k;
  }
  // Rounding can leave the total a hair below 1; give the residue to the
  // last arm with positive mass.
  for (std::size_t k = state.probs.size(); k-- > 0;) {
    if (state.probs[k] > 0.0) return k;
  }
  return state.probs.size() - 1;
}

std::vector<double> probabilities_from_weights(std::span<const double> weights,
                                               const EGConfig& config) {
  const double arms = static_cast<double>(weights.size());
  double total = 0.0;
  for (const double w : weights) total += w;
  std::vector<double> probs(weights.size());
  if (config.literal_smoothing) {
    double sum = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      probs[k] = (1.0 - config.kappa) * (weights[k] / total + config.kappa / arms);
      sum += probs[k];
    }
    for (double& p : probs) p /= sum;
  } else {
    for (std::size_t k = 0; k < weights.size(); ++k) {
      probs[k] = (1.0 - config.kappa) * (weights[k] / total) + config.kappa / arms;
    }
  }
  return probs;
}

EGState update_eg(const EGState& state, std::size_t arm, double reward, const EGConfig& config) {
  const std::size_t arms = state.weights.size();
  if (arm >= arms) throw ValidationError("arm index " + std::to_string(arm) + " out of range");
  if (!(reward >= 0.0 && reward <= 1.0)) throw ValidationError("EG reward must lie in [0, 1]");

  // The multiplicative step is applied in log space and the max is
  // subtracted before exponentiating; that is the max-rescaling of w.
  std::vector<double> log_w(arms);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < arms; ++k) {
    const double gain = reward * (k == arm ? 1.0 : 0.0) + config.beta;
    log_w[k] = std::log(state.weights[k]) + config.tau * gain / state.probs[k];
    if (!std::isfinite(log_w[k])) {
      throw NumericOverflowError("EG log-weight for arm " + std::to_string(k) +
                                 " is not finite");
    }
    top = std::max(top, log_w[k]);
  }
  EGState next;
  next.weights.resize(arms);
  for (std::size_t k = 0; k < arms; ++k) {
    next.weights[k] = std::exp(std::max(log_w[k] - top, kMinLogWeightRatio));
  }
  next.probs = probabilities_from_weights(next.weights, config);
  next.t = state.t + 1;
  next.arm_pulls = state.arm_pulls;
  ++next.arm_pulls[arm];
  return next;
}

}  // namespace egactive
