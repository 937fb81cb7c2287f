#include "egactive/explore.hpp"

#include <algorithm>
#include <cmath>

#include "egactive/error.hpp"

namespace egactive {
namespace {

StepResult commit_query(ActiveLearner& learner, StepOutcome outcome) {
  query_oracle(learner.pool, learner.oracle, outcome.chosen_id);
  Hypothesis next = train(*learner.dataset, learner.pool.labeled, learner.hyper);
  const std::vector<Id> population = learner.pool.pool_ids();
  StepResult result{outcome, reward_for_step(learner.model, next, *learner.dataset, population,
                                             learner.oracle.query_count())};
  learner.model = std::move(next);
  return result;
}

}  // namespace

ActiveLearner ActiveLearner::start(const Dataset& dataset, PoolState pool, Oracle oracle,
                                   const TrainHyper& hyper, const StrategyConfig& strategy,
                                   std::uint64_t seed) {
  strategy.validate();
  ActiveLearner learner;
  learner.dataset = &dataset;
  learner.model = train(dataset, pool.labeled, hyper);
  learner.pool = std::move(pool);
  learner.oracle = std::move(oracle);
  learner.hyper = hyper;
  learner.strategy = strategy;
  learner.rngs = RunRngs::from_seed(seed);
  return learner;
}

StepResult epsilon_active_step(ActiveLearner& learner, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ValidationError("epsilon must lie in [0, 1]");
  if (learner.pool.unlabeled.empty()) throw EmptyPoolError("pool exhausted before the budget");
  StepOutcome outcome;
  outcome.epsilon_used = epsilon;
  outcome.q = learner.rngs.explore.uniform();
  outcome.used_base_strategy = outcome.q < epsilon;
  outcome.chosen_id =
      outcome.used_base_strategy
          ? select_query(learner.strategy, learner.model, *learner.dataset, learner.pool,
                         learner.hyper, learner.rngs.select)
          : select_random(learner.pool.unlabeled, learner.rngs.select);
  return commit_query(learner, outcome);
}

StepResult base_strategy_step(ActiveLearner& learner) {
  if (learner.pool.unlabeled.empty()) throw EmptyPoolError("pool exhausted before the budget");
  StepOutcome outcome;
  outcome.epsilon_used = 1.0;
  outcome.used_base_strategy = true;
  outcome.chosen_id = select_query(learner.strategy, learner.model, *learner.dataset,
                                   learner.pool, learner.hyper, learner.rngs.select);
  return commit_query(learner, outcome);
}

double epsilon_for_exploration_rate(double exploration_rate) {
  if (!(exploration_rate >= 0.0 && exploration_rate <= 1.0)) {
    throw ValidationError("exploration rate must lie in [0, 1]");
  }
  return 1.0 - exploration_rate;
}

void AdaptiveP::validate() const {
  if (!(p_min > 0.0 && p_min <= p_max && p_max < 1.0)) {
    throw ValidationError("adaptive exploration needs 0 < p_min <= p_max < 1");
  }
  if (!(lambda > 0.0)) throw ValidationError("adaptive exploration lambda must be positive");
  if (!(p_explore >= p_min && p_explore <= p_max)) {
    throw ValidationError("initial exploration probability must lie in [p_min, p_max]");
  }
}

AdaptiveP adaptive_exploration_step(const AdaptiveP& state, double r) {
  AdaptiveP next = state;
  next.p_explore =
      std::clamp(state.p_explore * std::pow(state.lambda, 2.0 * r - 1.0), state.p_min, state.p_max);
  return next;
}

}  // namespace egactive
