#include "egactive/reward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "egactive/error.hpp"

namespace egactive {
namespace {
constexpr double kSnapUlps = 8.0 * std::numeric_limits<double>::epsilon();
}  // namespace

std::optional<double> cosine_alignment(const PredictionVector& a, const PredictionVector& b) {
  if (a.layout != b.layout) throw IncompatibleVectorsError("prediction layouts differ");
  if (a.values.size() != b.values.size()) {
    throw IncompatibleVectorsError("prediction lengths differ (" +
                                   std::to_string(a.values.size()) + " vs " +
                                   std::to_string(b.values.size()) + ")");
  }
  if (a.over_ids != b.over_ids) throw IncompatibleVectorsError("predictions cover different ids");

  double dot = 0.0;
  double sq_a = 0.0;
  double sq_b = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    sq_a += a.values[i] * a.values[i];
    sq_b += b.values[i] * b.values[i];
  }
  const double norm_a = std::sqrt(sq_a);
  const double norm_b = std::sqrt(sq_b);
  if (norm_a < kZeroNorm || norm_b < kZeroNorm) return std::nullopt;
  // sqrt(x * x) == x in IEEE arithmetic, so identical vectors give exactly 1.
  double d = dot / std::sqrt(sq_a * sq_b);
  // arccos has infinite slope at +-1; snap rounding noise from rescaled
  // vectors so it does not surface as a spurious ~1e-8 reward.
  if (d > 1.0 - kSnapUlps) d = 1.0;
  if (d < -1.0 + kSnapUlps) d = -1.0;
  return d;
}

double hypothesis_change_reward(double d) {
  if (!(d >= -1.0 - kClampTolerance && d <= 1.0 + kClampTolerance)) {
    throw DomainError("alignment " + std::to_string(d) + " lies outside [-1, 1]");
  }
  const double clamped = std::clamp(d, -1.0, 1.0);
  return std::min(2.0 * std::acos(clamped) / std::numbers::pi, 1.0);
}

RewardSample reward_from_alignment(std::optional<double> d, std::size_t iteration) {
  RewardSample sample;
  sample.iteration = iteration;
  if (!d) {
    sample.degenerate = true;
    return sample;
  }
  sample.d_value = *d;
  sample.r_value = hypothesis_change_reward(*d);
  return sample;
}

RewardSample reward_for_step(const Hypothesis& h_prev, const Hypothesis& h_next,
                             const Dataset& dataset, std::span<const Id> pool_ids,
                             std::size_t iteration) {
  if (pool_ids.empty()) throw ValidationError("reward population is empty");
  const PredictionVector before = predict_scores(h_prev, dataset, pool_ids);
  const PredictionVector after = predict_scores(h_next, dataset, pool_ids);
  return reward_from_alignment(cosine_alignment(before, after), iteration);
}

}  // namespace egactive
