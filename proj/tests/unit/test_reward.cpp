#include <doctest.h>

#include <cmath>
#include <numbers>

#include "egactive/dataset.hpp"
#include "egactive/error.hpp"
#include "egactive/model.hpp"
#include "egactive/pool.hpp"
#include "egactive/reward.hpp"
#include "egactive/rng.hpp"

using namespace egactive;

namespace {

PredictionVector vec(std::vector<double> values,
                     PredictionLayout layout = PredictionLayout::BinaryScore) {
  PredictionVector v;
  v.values = std::move(values);
  v.layout = layout;
  for (Id i = 0; i < v.values.size(); ++i) v.over_ids.push_back(i);
  return v;
}

PredictionVector random_vec(Rng& rng, std::size_t n) {
  std::vector<double> values(n);
  for (double& x : values) x = rng.normal();
  return vec(values);
}

}  // namespace

TEST_CASE("cosine alignment examples") {
  CHECK(*cosine_alignment(vec({1, 2, 3}), vec({1, 2, 3})) == 1.0);
  CHECK(std::abs(*cosine_alignment(vec({1, 0}), vec({0, 1}))) <= 1e-9);
  CHECK(std::abs(*cosine_alignment(vec({1, 0}), vec({1, 1})) - std::sqrt(2.0) / 2.0) <= 1e-9);
  CHECK(*cosine_alignment(vec({1, 0}), vec({-3, 0})) == -1.0);
}

TEST_CASE("cosine alignment errors and degenerate vectors") {
  CHECK_THROWS_AS(cosine_alignment(vec({1, 2}), vec({1, 2, 3})), IncompatibleVectorsError);
  CHECK_THROWS_AS(
      cosine_alignment(vec({1, 2}), vec({1, 2}, PredictionLayout::FlattenedProbabilities)),
      IncompatibleVectorsError);
  PredictionVector shifted = vec({1, 2});
  shifted.over_ids = {0, 5};
  CHECK_THROWS_AS(cosine_alignment(vec({1, 2}), shifted), IncompatibleVectorsError);

  CHECK_FALSE(cosine_alignment(vec({0, 0}), vec({1, 2})).has_value());
  CHECK_FALSE(cosine_alignment(vec({1, 2}), vec({1e-14, 0})).has_value());
  const RewardSample flagged = reward_from_alignment(std::nullopt, 4);
  CHECK(flagged.degenerate);
  CHECK(flagged.r_value == 0.0);
  CHECK(flagged.d_value == 1.0);
  CHECK(flagged.iteration == 4);
}

TEST_CASE("hypothesis change reward examples") {
  CHECK(std::abs(hypothesis_change_reward(1.0) - 0.0) <= 1e-9);
  CHECK(std::abs(hypothesis_change_reward(0.0) - 1.0) <= 1e-9);
  CHECK(std::abs(hypothesis_change_reward(std::sqrt(2.0) / 2.0) - 0.5) <= 1e-9);
  CHECK(std::abs(hypothesis_change_reward(-1.0) - 1.0) <= 1e-9);
  CHECK(hypothesis_change_reward(1.0 + 5e-10) == 0.0);
  CHECK(hypothesis_change_reward(-1.0 - 5e-10) == 1.0);
  CHECK_THROWS_AS(hypothesis_change_reward(1.0 + 1e-6), DomainError);
  CHECK_THROWS_AS(hypothesis_change_reward(-1.5), DomainError);
  CHECK_THROWS_AS(hypothesis_change_reward(std::nan("")), DomainError);
}

TEST_CASE("reward for a step") {
  const Dataset ds = make_synthetic(hidden_cluster_spec(10, 2));
  std::vector<Id> ids(ds.size());
  for (Id i = 0; i < ids.size(); ++i) ids[i] = i;
  Rng rng(6);
  Hypothesis h = Hypothesis::zeros(2, 2);
  for (double& w : h.weights) w = rng.normal();
  for (double& b : h.biases) b = rng.normal();

  SUBCASE("identical hypotheses give exactly zero") {
    const RewardSample s = reward_for_step(h, h, ds, ids, 3);
    CHECK(s.r_value == 0.0);
    CHECK(s.d_value == 1.0);
    CHECK_FALSE(s.degenerate);
  }
  SUBCASE("positive rescaling of the scores gives exactly zero") {
    for (const double alpha : {0.5, 3.0, 17.25, 1e3}) {
      Hypothesis scaled = h;
      for (double& w : scaled.weights) w *= alpha;
      for (double& b : scaled.biases) b *= alpha;
      CHECK(reward_for_step(h, scaled, ds, ids).r_value == 0.0);
    }
  }
  SUBCASE("zero model is degenerate") {
    const RewardSample s = reward_for_step(Hypothesis::zeros(2, 2), h, ds, ids);
    CHECK(s.degenerate);
    CHECK(s.r_value == 0.0);
  }
  SUBCASE("empty population is rejected") {
    CHECK_THROWS(reward_for_step(h, h, ds, std::vector<Id>{}));
  }
}

TEST_CASE("three-point hand trace") {
  Dataset ds;
  ds.dim = 2;
  ds.num_classes = 2;
  ds.features = {1, 0, 0, 1, 1, 1};
  ds.labels = {0, 1, 1};
  // Class-0 row all zeros, so the binary score is the class-1 row's dot.
  Hypothesis a = Hypothesis::zeros(2, 2);
  a.weights = {0, 0, 1, 0};
  Hypothesis b = Hypothesis::zeros(2, 2);
  b.weights = {0, 0, 0, 1};
  // Scores: a -> (1, 0, 1), b -> (0, 1, 1). dot = 1, norms sqrt 2, cos = 1/2.
  const RewardSample s = reward_for_step(a, b, ds, std::vector<Id>{0, 1, 2});
  CHECK(std::abs(s.d_value - 0.5) <= 1e-12);
  // arccos(1/2) = pi/3, so r = 2/3.
  CHECK(std::abs(s.r_value - 2.0 / 3.0) <= 1e-12);
}

TEST_CASE("reward population: labelled plus unlabelled is invariant across a query") {
  // Moving an id from U to L leaves L ∪ U unchanged, so the shrinking-set and
  // the fixed-pool readings give the same reward.
  const Dataset ds = make_synthetic(two_gaussian_spec(10, 9));
  PoolSplit split = split_pool(ds, 9, 1, 0.2);
  const std::vector<Id> before = split.pool.pool_ids();
  const Hypothesis h_prev = train(ds, split.pool.labeled, TrainHyper{});
  query_oracle(split.pool, split.oracle, split.pool.unlabeled.front());
  const std::vector<Id> after = split.pool.pool_ids();
  CHECK(before == after);
  const Hypothesis h_next = train(ds, split.pool.labeled, TrainHyper{});
  CHECK(reward_for_step(h_prev, h_next, ds, before).r_value ==
        reward_for_step(h_prev, h_next, ds, after).r_value);
}

TEST_CASE("reward properties") {
  Rng rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng.index(12);
    const PredictionVector a = random_vec(rng, n);
    PredictionVector b = random_vec(rng, n);
    if (trial % 5 == 0) {
      // Adversarial near-opposite vectors.
      for (std::size_t i = 0; i < n; ++i) b.values[i] = -a.values[i] * (1.0 + 1e-15 * rng.normal());
    }
    const double d = *cosine_alignment(a, b);
    CHECK(d >= -1.0);
    CHECK(d <= 1.0);
    const double r = hypothesis_change_reward(d);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
    CHECK(*cosine_alignment(b, a) == d);

    const double alpha = std::exp(4.0 * rng.normal());
    const double beta = std::exp(4.0 * rng.normal());
    PredictionVector sa = a, sb = b;
    for (double& x : sa.values) x *= alpha;
    for (double& x : sb.values) x *= beta;
    CHECK(std::abs(*cosine_alignment(sa, sb) - d) <= 1e-9);
  }
  double previous = hypothesis_change_reward(-1.0);
  for (int i = 1; i <= 2000; ++i) {
    const double d = -1.0 + i / 1000.0;
    const double r = hypothesis_change_reward(d);
    CHECK(r <= previous);
    if (d > 0.0) CHECK(r < previous);
    previous = r;
  }
}
