#include "egactive/selftest.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "egactive/dataset.hpp"
#include "egactive/eg_meta.hpp"
#include "egactive/explore.hpp"
#include "egactive/model.hpp"
#include "egactive/pool.hpp"
#include "egactive/reward.hpp"
#include "egactive/strategies.hpp"

namespace egactive {
namespace {

class Checker {
 public:
  explicit Checker(SelftestReport& report) : report_(report) {}

  void expect(bool condition, const std::string& what) {
    ++report_.checks;
    if (!condition) report_.failures.push_back(what);
  }
  void near(double actual, double expected, double tol, const std::string& what) {
    std::ostringstream msg;
    msg << what << ": got " << actual << ", expected " << expected;
    expect(std::abs(actual - expected) <= tol, msg.str());
  }

 private:
  SelftestReport& report_;
};

PredictionVector binary(std::vector<double> values) {
  PredictionVector v;
  v.values = std::move(values);
  for (std::size_t i = 0; i < v.values.size(); ++i) v.over_ids.push_back(i);
  return v;
}

void check_reward(Checker& check) {
  check.near(hypothesis_change_reward(1.0), 0.0, 1e-9, "reward at d=1");
  check.near(hypothesis_change_reward(0.0), 1.0, 1e-9, "reward at d=0");
  check.near(hypothesis_change_reward(std::sqrt(2.0) / 2.0), 0.5, 1e-9, "reward at d=sqrt2/2");
  check.near(hypothesis_change_reward(-1.0), 1.0, 1e-9, "reward clamp at d=-1");
  check.near(*cosine_alignment(binary({1, 0}), binary({1, 1})), std::sqrt(0.5), 1e-9,
             "cosine of (1,0),(1,1)");
  check.expect(!cosine_alignment(binary({0, 0}), binary({1, 1})), "zero vector is degenerate");
}

void check_eg(Checker& check) {
  EGConfig config;
  config.candidates = {0.0, 1.0};
  config.tau = 0.1;
  config.beta = 0.0;
  config.kappa = 0.0;
  const EGState next = update_eg(init_eg(config), 0, 1.0, config);
  const double e = std::exp(0.2);
  check.near(next.probs[0], e / (1.0 + e), 1e-12, "EG hand oracle p0");
  check.near(next.probs[1], 1.0 / (1.0 + e), 1e-12, "EG hand oracle p1");

  Rng rng(7);
  for (std::size_t trial = 0; trial < 500; ++trial) {
    EGConfig c;
    c.candidates.assign(2 + rng.index(10), 0.0);
    for (std::size_t k = 0; k < c.candidates.size(); ++k) c.candidates[k] = k / 20.0;
    c.tau = 0.01 + rng.uniform();
    c.beta = 0.1 * rng.uniform();
    c.kappa = 0.5 * rng.uniform();
    EGState state = init_eg(c);
    for (int step = 0; step < 20; ++step) {
      state = update_eg(state, rng.index(c.arms()), rng.uniform(), c);
    }
    double total = 0.0;
    double low = 1.0;
    for (const double p : state.probs) {
      total += p;
      low = std::min(low, p);
    }
    check.expect(std::abs(total - 1.0) <= 1e-9 &&
                     low >= c.kappa / static_cast<double>(c.arms()) - 1e-9,
                 "EG simplex invariant");
  }

  std::size_t converged = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EGConfig c;
    c.candidates = {0.0, 1.0};
    EGState state = init_eg(c);
    Rng draws(seed);
    for (int i = 0; i < 2000; ++i) {
      const std::size_t arm = sample_arm(state, draws);
      const double reward = draws.uniform() < (arm == 0 ? 0.9 : 0.1) ? 1.0 : 0.0;
      state = update_eg(state, arm, reward, c);
    }
    if (state.probs[0] > 0.6) ++converged;
  }
  check.expect(converged >= 9, "EG finds the better Bernoulli arm");
}

void check_model_and_pool(Checker& check) {
  const Dataset data = make_synthetic(two_gaussian_spec(50, 3));
  const PoolSplit a = split_pool(data, 11, 1, 0.2);
  const PoolSplit b = split_pool(data, 11, 1, 0.2);
  check.expect(a.pool.labeled == b.pool.labeled && a.test_ids == b.test_ids,
               "split_pool is deterministic");
  check.expect(a.test_ids.size() == 20 && a.pool.labeled.size() == 2, "split_pool sizes");

  std::vector<Id> ids = {0, 1, 50, 51, 2};
  std::vector<ClassIndex> labels;
  for (const Id id : ids) labels.push_back(data.labels[id]);
  Hypothesis h = Hypothesis::zeros(2, 2);
  h.weights = {0.3, -0.2, -0.1, 0.4};
  h.biases = {0.05, -0.05};
  const LossGradient g = training_loss(h, data, ids, labels, 1e-3);
  const double step = 1e-6;
  for (std::size_t k = 0; k < h.weights.size(); ++k) {
    Hypothesis up = h;
    Hypothesis down = h;
    up.weights[k] += step;
    down.weights[k] -= step;
    const double fd = (training_loss(up, data, ids, labels, 1e-3).loss -
                       training_loss(down, data, ids, labels, 1e-3).loss) /
                      (2.0 * step);
    check.expect(std::abs(fd - g.grad_weights[k]) <= 1e-5 * std::max(1.0, std::abs(fd)),
                 "loss gradient matches finite differences");
  }

  const Hypothesis full = train(data, a.pool.pool_ids(), TrainHyper{});
  check.expect(evaluate(full, data, a.test_ids) < 0.05, "separable data is learned");
}

void check_wrapper(Checker& check) {
  const Dataset data = make_synthetic(hidden_cluster_spec(60, 5));
  const TrainHyper hyper{50, 0.1, 1e-3, 0};
  const StrategyConfig strategy{StrategyKind::Uncertainty, 5, 1.0};
  PoolSplit s1 = split_pool(data, 2, 1, 0.2);
  PoolSplit s2 = split_pool(data, 2, 1, 0.2);
  ActiveLearner wrapped = ActiveLearner::start(data, s1.pool, s1.oracle, hyper, strategy, 9);
  ActiveLearner bare = ActiveLearner::start(data, s2.pool, s2.oracle, hyper, strategy, 9);
  bool same = true;
  for (int i = 0; i < 30; ++i) {
    const StepResult a = epsilon_active_step(wrapped, 1.0);
    const StepResult b = base_strategy_step(bare);
    same = same && a.outcome.chosen_id == b.outcome.chosen_id &&
           a.reward.r_value == b.reward.r_value;
    const std::size_t before = wrapped.pool.unlabeled.size();
    check.expect(wrapped.pool.is_labeled(a.outcome.chosen_id) &&
                     !wrapped.pool.is_unlabeled(a.outcome.chosen_id),
                 "queried id moves to L");
    check.expect(before + wrapped.pool.labeled.size() == wrapped.pool.pool_size(),
                 "pool size is conserved");
    check.expect(a.reward.r_value >= 0.0 && a.reward.r_value <= 1.0, "reward in [0, 1]");
  }
  check.expect(same, "epsilon = 1 matches the bare strategy");
}

}  // namespace

SelftestReport run_selftest() {
  SelftestReport report;
  Checker check(report);
  try {
    check_reward(check);
    check_eg(check);
    check_model_and_pool(check);
    check_wrapper(check);
  } catch (const std::exception& e) {
    report.failures.push_back(std::string("unexpected exception: ") + e.what());
  }
  return report;
}

}  // namespace egactive
