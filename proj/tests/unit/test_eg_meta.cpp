#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "egactive/dataset.hpp"
#include "egactive/eg_meta.hpp"
#include "egactive/error.hpp"
#include "egactive/harness.hpp"
#include "egactive/rng.hpp"

using namespace egactive;

namespace {

EGConfig config_with(std::vector<double> candidates, double tau, double beta, double kappa) {
  EGConfig c;
  c.candidates = std::move(candidates);
  c.tau = tau;
  c.beta = beta;
  c.kappa = kappa;
  return c;
}

std::vector<double> grid(std::size_t arms) {
  std::vector<double> g(arms);
  for (std::size_t k = 0; k < arms; ++k) g[k] = static_cast<double>(k) / static_cast<double>(arms - 1);
  return g;
}

void check_simplex(const EGState& s, const EGConfig& c) {
  const double total = std::accumulate(s.probs.begin(), s.probs.end(), 0.0);
  CHECK(std::abs(total - 1.0) <= 1e-9);
  for (const double p : s.probs) CHECK(p >= c.kappa / static_cast<double>(s.probs.size()) - 1e-9);
  for (const double w : s.weights) {
    CHECK(std::isfinite(w));
    CHECK(w > 0.0);
  }
  CHECK(std::accumulate(s.arm_pulls.begin(), s.arm_pulls.end(), std::size_t{0}) == s.t);
}

}  // namespace

TEST_CASE("init") {
  const EGState four = init_eg(config_with({0.0, 0.25, 0.5, 1.0}, 0.1, 0.0, 0.1));
  CHECK(four.probs == std::vector<double>{0.25, 0.25, 0.25, 0.25});
  CHECK(four.t == 0);
  const EGState two = init_eg(config_with({0.0, 1.0}, 0.1, 0.0, 0.1));
  CHECK(two.weights == std::vector<double>{1.0, 1.0});
  CHECK(two.arm_pulls == std::vector<std::size_t>{0, 0});
  CHECK(init_eg(EGConfig{}).probs.size() == 11);

  CHECK_THROWS_AS(init_eg(config_with({0.5}, 0.1, 0.0, 0.1)), ValidationError);
  CHECK_THROWS_AS(init_eg(config_with({0.0, 1.5}, 0.1, 0.0, 0.1)), ValidationError);
  CHECK_THROWS_AS(init_eg(config_with({0.0, 1.0}, 0.0, 0.0, 0.1)), ValidationError);
  CHECK_THROWS_AS(init_eg(config_with({0.0, 1.0}, 0.1, -1.0, 0.1)), ValidationError);
  CHECK_THROWS_AS(init_eg(config_with({0.0, 1.0}, 0.1, 0.0, 1.0)), ValidationError);
  CHECK_THROWS_AS(config_with({0.5, 0.5}, 0.1, 0.0, 0.1).validate(), ValidationError);
  CHECK_NOTHROW(init_eg(config_with({0.5, 0.5}, 0.1, 0.0, 0.1)));
}

TEST_CASE("sample_arm") {
  SUBCASE("near-degenerate simplex keeps the floor") {
    const EGConfig c = config_with(grid(4), 0.1, 0.0, 0.1);
    EGState s = init_eg(c);
    s.weights = {1.0, 1e-300, 1e-300, 1e-300};
    s.probs = probabilities_from_weights(s.weights, c);
    Rng rng(1);
    std::size_t zero = 0;
    for (int i = 0; i < 10000; ++i) zero += sample_arm(s, rng) == 0;
    CHECK(zero / 10000.0 >= 1.0 - c.kappa);
  }
  SUBCASE("uniform frequencies") {
    const EGState s = init_eg(config_with(grid(4), 0.1, 0.0, 0.1));
    Rng rng(2);
    std::vector<int> counts(4, 0);
    for (int i = 0; i < 10000; ++i) ++counts[sample_arm(s, rng)];
    for (const int n : counts) CHECK(std::abs(n / 10000.0 - 0.25) <= 0.02);
  }
  SUBCASE("deterministic for a fixed seed") {
    const EGState s = init_eg(EGConfig{});
    Rng a(9), b(9);
    for (int i = 0; i < 500; ++i) CHECK(sample_arm(s, a) == sample_arm(s, b));
  }
  SUBCASE("zero-mass arms are never drawn") {
    EGState s = init_eg(config_with(grid(3), 0.1, 0.0, 0.0));
    s.probs = {0.0, 1.0, 0.0};
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) CHECK(sample_arm(s, rng) == 1);
  }
}

TEST_CASE("update hand oracle") {
  const EGConfig c = config_with({0.0, 1.0}, 0.1, 0.0, 0.0);
  const EGState next = update_eg(init_eg(c), 0, 1.0, c);
  // e^0.2 / (1 + e^0.2) and 1 / (1 + e^0.2), computed by hand.
  CHECK(std::abs(next.probs[0] - 0.5498339973124778) <= 1e-6);
  CHECK(std::abs(next.probs[1] - 0.4501660026875222) <= 1e-6);
  CHECK(next.weights[0] == 1.0);
  CHECK(std::abs(next.weights[1] - std::exp(-0.2)) <= 1e-15);
  CHECK(next.t == 1);
  CHECK(next.arm_pulls == std::vector<std::size_t>{1, 0});
}

TEST_CASE("update examples") {
  SUBCASE("zero reward and zero beta leave p unchanged") {
    const EGConfig c = config_with(grid(5), 0.3, 0.0, 0.2);
    EGState s = init_eg(c);
    s = update_eg(s, 1, 0.9, c);
    const std::vector<double> before = s.probs;
    s = update_eg(s, 3, 0.0, c);
    for (std::size_t k = 0; k < before.size(); ++k) CHECK(std::abs(s.probs[k] - before[k]) <= 1e-15);
  }
  SUBCASE("positive beta at uniform p keeps p uniform") {
    const EGConfig c = config_with(grid(6), 0.1, 0.05, 0.1);
    const EGState s = update_eg(init_eg(c), 2, 0.0, c);
    for (const double p : s.probs) CHECK(p == s.probs.front());
    CHECK(std::max_element(s.probs.begin(), s.probs.end()) - s.probs.begin() == 0);
  }
  SUBCASE("errors") {
    const EGConfig c = config_with(grid(3), 0.1, 0.0, 0.1);
    const EGState s = init_eg(c);
    CHECK_THROWS_AS(update_eg(s, 3, 0.5, c), ValidationError);
    CHECK_THROWS_AS(update_eg(s, 0, 1.5, c), ValidationError);
    CHECK_THROWS_AS(update_eg(s, 0, -0.1, c), ValidationError);
  }
}

TEST_CASE("simplex invariants under randomized updates") {
  Rng rng(100);
  for (int run = 0; run < 100; ++run) {
    const std::size_t arms = 2 + rng.index(10);
    const EGConfig c = config_with(grid(arms), 0.01 + 0.99 * rng.uniform(), 0.1 * rng.uniform(),
                                   0.5 * rng.uniform());
    EGState s = init_eg(c);
    for (int i = 0; i < 100; ++i) {
      s = update_eg(s, rng.index(arms), rng.uniform(), c);
      check_simplex(s, c);
    }
  }
}

TEST_CASE("weight-scale invariance of the probabilities") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t arms = 2 + rng.index(8);
    const EGConfig c = config_with(grid(arms), 0.1, 0.0, 0.5 * rng.uniform());
    std::vector<double> w(arms);
    for (double& x : w) x = std::exp(3.0 * rng.normal());
    const double scale = std::exp(10.0 * rng.normal());
    std::vector<double> scaled = w;
    for (double& x : scaled) x *= scale;
    const auto p = probabilities_from_weights(w, c);
    const auto q = probabilities_from_weights(scaled, c);
    for (std::size_t k = 0; k < arms; ++k) CHECK(std::abs(p[k] - q[k]) <= 1e-12);
  }
}

TEST_CASE("permutation equivariance with three arms") {
  const std::vector<double> base = {0.1, 0.5, 0.9};
  const std::vector<std::size_t> perm = {2, 0, 1};  // base[k] sits at position perm[k]
  std::vector<double> permuted(3);
  for (std::size_t k = 0; k < 3; ++k) permuted[perm[k]] = base[k];
  const EGConfig a_cfg = config_with(base, 0.2, 0.01, 0.1);
  const EGConfig b_cfg = config_with(permuted, 0.2, 0.01, 0.1);
  EGState a = init_eg(a_cfg);
  EGState b = init_eg(b_cfg);
  Rng draws(77), rewards(78);
  for (int i = 0; i < 300; ++i) {
    // The draw is made once in the original order and mapped to the
    // permuted order, so both states see the same semantic arm.
    const std::size_t arm = sample_arm(a, draws);
    const double r = rewards.uniform() * base[arm];
    a = update_eg(a, arm, r, a_cfg);
    b = update_eg(b, perm[arm], r, b_cfg);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(a.probs[k] - b.probs[perm[k]]) <= 1e-12);
  }
}

TEST_CASE("zero-reward stream with zero beta stays at the initial p") {
  const EGConfig c = config_with(grid(5), 0.5, 0.0, 0.1);
  EGState s = init_eg(c);
  const std::vector<double> initial = s.probs;
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    s = update_eg(s, rng.index(5), 0.0, c);
    for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(s.probs[k] - initial[k]) <= 1e-12);
  }
}

TEST_CASE("a rewarded arm gains probability when kappa is zero") {
  // With beta > 0 every arm is boosted by beta / p_k, which can outweigh a
  // small reward on a high-probability arm; the property holds for beta = 0.
  Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t arms = 2 + rng.index(6);
    const EGConfig c = config_with(grid(arms), 0.01 + rng.uniform(), 0.0, 0.0);
    EGState s = init_eg(c);
    for (int warm = 0; warm < 5; ++warm) s = update_eg(s, rng.index(arms), rng.uniform(), c);
    const std::size_t arm = rng.index(arms);
    const double r = 0.05 + 0.95 * rng.uniform();
    const EGState next = update_eg(s, arm, r, c);
    if (s.probs[arm] < 1.0 - 1e-12) CHECK(next.probs[arm] > s.probs[arm]);
  }
}

TEST_CASE("literal smoothing still yields a distribution") {
  EGConfig c = config_with(grid(4), 0.1, 0.01, 0.2);
  c.literal_smoothing = true;
  EGState s = init_eg(c);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    s = update_eg(s, rng.index(4), rng.uniform(), c);
    const double total = std::accumulate(s.probs.begin(), s.probs.end(), 0.0);
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
  const auto p = probabilities_from_weights(std::vector<double>{1.0, 0.0, 0.0, 0.0}, c);
  // (1 - k)(1 + k/4) and (1 - k)(k/4), renormalised.
  CHECK(p[0] == doctest::Approx(1.05 / 1.2).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.05 / 1.2).epsilon(1e-12));
}

TEST_CASE("stationary bandit concentrates on the better arm") {
  const EGConfig c = config_with({0.0, 1.0}, EGConfig{}.tau, EGConfig{}.beta, EGConfig{}.kappa);
  int good = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    EGState s = init_eg(c);
    for (int i = 0; i < 2000; ++i) {
      const std::size_t arm = sample_arm(s, rng);
      const double r = rng.uniform() < (arm == 0 ? 0.9 : 0.1) ? 1.0 : 0.0;
      s = update_eg(s, arm, r, c);
    }
    good += s.probs[0] > 0.6;
  }
  CHECK(good >= 45);
}

TEST_CASE("EG inside the learning loop") {
  ExperimentConfig base;
  base.source.synthetic = hidden_cluster_spec(20, 3);
  base.strategy.kind = StrategyKind::Uncertainty;
  base.model.epochs = 30;
  base.base_seed = 21;

  SUBCASE("a single-query budget makes one update") {
    ExperimentConfig cfg = base;
    cfg.group = Group::EG;
    cfg.budget = 1;
    cfg.checkpoint_every = 1;
    cfg.eg.iterations = 1;
    const ExperimentResult res = run_experiment(cfg);
    REQUIRE(res.runs.front().eg_state.has_value());
    CHECK(res.runs.front().eg_state->t == 1);
    CHECK(res.runs.front().trace.steps == 1);
    CHECK(res.runs.front().trace.checkpoints.size() == 1);
  }
  SUBCASE("equal candidates reproduce the fixed-epsilon trace") {
    ExperimentConfig eg = base;
    eg.group = Group::EG;
    eg.budget = 25;
    eg.checkpoint_every = 5;
    eg.eg.iterations = 25;
    eg.eg.candidates = {0.5, 0.5, 0.5};
    ExperimentConfig fixed = base;
    fixed.group = Group::FixedEpsilon;
    fixed.epsilon = 0.5;
    fixed.budget = 25;
    fixed.checkpoint_every = 5;
    const Dataset ds = base.source.materialize();
    const ReplicateRun a = run_replicate(ds, eg, 0);
    const ReplicateRun b = run_replicate(ds, fixed, 0);
    REQUIRE(a.trace.checkpoints.size() == b.trace.checkpoints.size());
    for (std::size_t i = 0; i < a.trace.checkpoints.size(); ++i) {
      CHECK(a.trace.checkpoints[i].regret == b.trace.checkpoints[i].regret);
      CHECK(a.trace.checkpoints[i].mean_reward_since_last ==
            b.trace.checkpoints[i].mean_reward_since_last);
    }
  }
}
