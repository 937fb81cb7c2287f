#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "egactive/dataset.hpp"
#include "egactive/model.hpp"

namespace egactive {

/// Norms below this make the alignment undefined.
inline constexpr double kZeroNorm = 1e-12;
/// How far outside [-1, 1] an alignment may stray before it is an error.
inline constexpr double kClampTolerance = 1e-9;

struct RewardSample {
  std::size_t iteration = 0;
  double d_value = 1.0;  // 1.0 when degenerate
  double r_value = 0.0;
  bool degenerate = false;
};

/// Cosine of the angle between two prediction vectors, clamped to [-1, 1].
/// Returns std::nullopt (the degenerate sentinel) when either norm is below
/// kZeroNorm. Throws IncompatibleVectorsError on layout, length or id mismatch.
std::optional<double> cosine_alignment(const PredictionVector& a, const PredictionVector& b);

/// r = min(2 * arccos(d) / pi, 1). Throws DomainError for d outside
/// [-1 - kClampTolerance, 1 + kClampTolerance].
double hypothesis_change_reward(double d);

/// Turns an alignment (or the degenerate sentinel) into a RewardSample.
RewardSample reward_from_alignment(std::optional<double> d, std::size_t iteration);

/// Predictions of both hypotheses over `pool_ids` (the current L ∪ U),
/// then alignment and reward.
RewardSample reward_for_step(const Hypothesis& h_prev, const Hypothesis& h_next,
                             const Dataset& dataset, std::span<const Id> pool_ids,
                             std::size_t iteration = 0);

}  // namespace egactive
