#pragma once

#include <cstddef>

#include "egactive/dataset.hpp"
#include "egactive/model.hpp"
#include "egactive/pool.hpp"
#include "egactive/reward.hpp"
#include "egactive/rng.hpp"
#include "egactive/strategies.hpp"

namespace egactive {

/// Everything one active-learning run owns. Not shared between runs.
struct ActiveLearner {
  const Dataset* dataset = nullptr;
  PoolState pool;
  Oracle oracle{{}};
  Hypothesis model;
  TrainHyper hyper;
  StrategyConfig strategy;
  RunRngs rngs = RunRngs::from_seed(0);

  /// Trains the initial model on the current labelled set.
  static ActiveLearner start(const Dataset& dataset, PoolState pool, Oracle oracle,
                             const TrainHyper& hyper, const StrategyConfig& strategy,
                             std::uint64_t seed);
};

struct StepOutcome {
  Id chosen_id = 0;
  bool used_base_strategy = false;
  double epsilon_used = 1.0;
  double q = 0.0;  // uniform draw in [0, 1)
};

struct StepResult {
  StepOutcome outcome;
  RewardSample reward;
};

/// One randomised query. Draws q from the explore stream; the base strategy
/// picks when q < epsilon, otherwise a uniform pick from U. The chosen id is
/// labelled, the model retrained on the enlarged L, and the reward measured
/// over L ∪ U. `learner.model` holds h_next afterwards.
StepResult epsilon_active_step(ActiveLearner& learner, double epsilon);

/// The bare strategy: no q draw, always the base strategy.
StepResult base_strategy_step(ActiveLearner& learner);

/// "c-STRAT" labels give the exploration probability c; the wrapper's
/// epsilon is the exploitation probability 1 - c.
double epsilon_for_exploration_rate(double exploration_rate);

/// Multiplicative exploration-rate adaptation used by the P-STRAT group.
struct AdaptiveP {
  double p_explore = 0.5;
  double lambda = 2.0;
  double p_min = 0.01;
  double p_max = 0.99;

  void validate() const;
};

/// p <- clamp(p * lambda^(2r - 1), p_min, p_max).
AdaptiveP adaptive_exploration_step(const AdaptiveP& state, double r);

}  // namespace egactive
