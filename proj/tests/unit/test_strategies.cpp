#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "egactive/dataset.hpp"
#include "egactive/error.hpp"
#include "egactive/model.hpp"
#include "egactive/rng.hpp"
#include "egactive/strategies.hpp"

using namespace egactive;

namespace {

/// Features are log-probabilities, so the identity model reproduces the
/// given probability rows exactly through the softmax.
struct ProbabilityFixture {
  Dataset dataset;
  Hypothesis identity;
};

ProbabilityFixture fixture_for(const std::vector<std::vector<double>>& rows) {
  ProbabilityFixture f;
  const std::size_t classes = rows.front().size();
  f.dataset.dim = classes;
  f.dataset.num_classes = classes;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const double p : rows[i]) f.dataset.features.push_back(std::log(p));
    f.dataset.labels.push_back(i % classes);
  }
  f.identity = Hypothesis::zeros(classes, classes);
  for (std::size_t c = 0; c < classes; ++c) f.identity.weights[c * classes + c] = 1.0;
  return f;
}

double brute_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (const double v : p) h += v > 0 ? -v * std::log(v) : 0.0;
  return h;
}

std::vector<Id> range_ids(Id first, Id last) {
  std::vector<Id> ids;
  for (Id id = first; id < last; ++id) ids.push_back(id);
  return ids;
}

}  // namespace

TEST_CASE("uncertainty sampling picks maximal entropy") {
  SUBCASE("even split beats a confident row") {
    const auto f = fixture_for({{0.5, 0.5}, {0.99, 0.01}});
    CHECK(select_uncertainty(f.identity, f.dataset, std::vector<Id>{0, 1}) == 0);
    CHECK(select_uncertainty(f.identity, f.dataset, std::vector<Id>{1, 0}) == 0);
  }
  SUBCASE("identical rows tie to the lowest id") {
    const auto f = fixture_for({{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}});
    CHECK(select_uncertainty(f.identity, f.dataset, std::vector<Id>{2, 1}) == 1);
  }
  SUBCASE("matches brute-force entropies on five hand-set rows") {
    const std::vector<std::vector<double>> rows = {
        {0.7, 0.2, 0.1}, {0.4, 0.35, 0.25}, {0.9, 0.05, 0.05}, {0.34, 0.33, 0.33}, {0.5, 0.5, 1e-9}};
    const auto f = fixture_for(rows);
    std::size_t expected = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (brute_entropy(rows[i]) > brute_entropy(rows[expected])) expected = i;
    }
    CHECK(expected == 3);
    CHECK(select_uncertainty(f.identity, f.dataset, range_ids(0, 5)) == expected);
  }
  SUBCASE("empty pool") {
    const auto f = fixture_for({{0.5, 0.5}});
    CHECK_THROWS_AS(select_uncertainty(f.identity, f.dataset, std::vector<Id>{}), EmptyPoolError);
  }
}

TEST_CASE("vote entropy orders disagreement") {
  const std::vector<std::size_t> split = {3, 2};
  const std::vector<std::size_t> unanimous = {5, 0};
  CHECK(vote_entropy(split) > vote_entropy(unanimous));
  CHECK(vote_entropy(unanimous) == 0.0);
  CHECK(vote_entropy(split) ==
        doctest::Approx(-(0.6 * std::log(0.6) + 0.4 * std::log(0.4))).epsilon(1e-14));
}

TEST_CASE("query by committee") {
  const Dataset ds = make_synthetic(hidden_cluster_spec(20, 3));
  const TrainHyper hyper{60, 0.1, 1e-3, 0};

  SUBCASE("a zero-variance labelled set gives a unanimous committee") {
    Dataset dup = ds;
    // Two labelled copies of the same example.
    for (std::size_t j = 0; j < dup.dim; ++j) dup.features[1 * dup.dim + j] = dup.features[j];
    dup.labels[1] = dup.labels[0];
    const std::vector<Id> unlabeled = {7, 4, 30, 45};
    CHECK(select_qbc(dup, std::vector<Id>{0, 1}, unlabeled, 5, 123, hyper) == 4);
  }
  SUBCASE("matches a brute-force recomputation with K = 3") {
    const std::vector<Id> labeled = {0, 1, 2, 20, 21, 40};
    const std::vector<Id> unlabeled = range_ids(3, 20);
    std::vector<Id> pool = unlabeled;
    for (Id id = 22; id < 40; ++id) pool.push_back(id);
    for (Id id = 41; id < ds.size(); ++id) pool.push_back(id);
    const std::uint64_t seed = 77;

    std::vector<std::map<ClassIndex, std::size_t>> votes(pool.size());
    for (std::size_t m = 0; m < 3; ++m) {
      Rng rng(derive_seed(seed, m));
      std::vector<Id> ids;
      std::vector<ClassIndex> labels;
      for (std::size_t i = 0; i < labeled.size(); ++i) {
        ids.push_back(labeled[rng.index(labeled.size())]);
        labels.push_back(ds.labels[ids.back()]);
      }
      const Hypothesis member = train_with_labels(ds, ids, labels, hyper);
      for (std::size_t i = 0; i < pool.size(); ++i) {
        std::vector<double> s(ds.num_classes);
        member.scores(ds.row(pool[i]), s);
        const auto top = static_cast<ClassIndex>(std::max_element(s.begin(), s.end()) - s.begin());
        ++votes[i][top];
      }
    }
    Id expected = pool.front();
    double best = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      double h = 0.0;
      for (const auto& [cls, count] : votes[i]) {
        const double f = count / 3.0;
        h -= f * std::log(f);
      }
      if (h > best || (h == best && pool[i] < expected)) {
        best = h;
        expected = pool[i];
      }
    }
    CHECK(select_qbc(ds, labeled, pool, 3, seed, hyper) == expected);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(select_qbc(ds, std::vector<Id>{0}, std::vector<Id>{1}, 3, 0, hyper),
                    InsufficientLabelsError);
    CHECK_THROWS_AS(select_qbc(ds, std::vector<Id>{0, 1}, std::vector<Id>{}, 3, 0, hyper),
                    EmptyPoolError);
  }
}

TEST_CASE("density weighting") {
  SUBCASE("exponent zero reduces to uncertainty sampling") {
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
      Dataset ds;
      ds.dim = 2;
      ds.num_classes = 3;
      for (int i = 0; i < 12; ++i) {
        ds.features.push_back(rng.normal());
        ds.features.push_back(rng.normal());
        ds.labels.push_back(i % 3);
      }
      Hypothesis h = Hypothesis::zeros(3, 2);
      for (double& w : h.weights) w = rng.normal();
      const auto ids = range_ids(0, 12);
      CHECK(select_density_weighted(h, ds, ids, 0.0) == select_uncertainty(h, ds, ids));
    }
  }
  SUBCASE("equal entropy prefers the dense region") {
    Dataset ds;
    ds.dim = 2;
    ds.num_classes = 2;
    // id 0 isolated along +y; ids 1..6 bunched along +x (id 1 is the
    // candidate of interest, the rest are its neighbours).
    ds.features = {0, 1, 1, 0, 1, 0.05, 1, -0.05, 1, 0.1, 1, -0.1, 1, 0.02};
    ds.labels = {0, 1, 0, 1, 0, 1, 0};
    const auto ids = range_ids(0, 7);
    const Hypothesis zero = Hypothesis::zeros(2, 2);
    // Direct score computation: entropy is log 2 for all, so the argmax of
    // mean cosine similarity decides.
    std::vector<double> density(ids.size(), 0.0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto a = ds.row(ids[i]);
      for (std::size_t k = 0; k < ids.size(); ++k) {
        const auto b = ds.row(ids[k]);
        density[i] += (a[0] * b[0] + a[1] * b[1]) /
                      (std::hypot(a[0], a[1]) * std::hypot(b[0], b[1])) / ids.size();
      }
    }
    const auto expected = static_cast<Id>(std::max_element(density.begin(), density.end()) - density.begin());
    CHECK(expected != 0);
    CHECK(select_density_weighted(zero, ds, ids, 1.0) == expected);
    CHECK(select_uncertainty(zero, ds, ids) == 0);
  }
  SUBCASE("singleton pool") {
    const Dataset ds = make_synthetic(two_gaussian_spec(3, 1));
    CHECK(select_density_weighted(Hypothesis::zeros(2, 2), ds, std::vector<Id>{4}, 2.0) == 4);
  }
  SUBCASE("zero-norm vectors contribute zero similarity") {
    Dataset ds;
    ds.dim = 2;
    ds.num_classes = 2;
    ds.features = {0, 0, 1, 0, 2, 0};
    ds.labels = {0, 1, 0};
    const auto density = density_scores(ds, range_ids(0, 3));
    CHECK(density[0] == 0.0);
    CHECK(density[1] == doctest::Approx(2.0 / 3.0));
  }
}

TEST_CASE("random selection") {
  Rng rng(1);
  CHECK(select_random(std::vector<Id>{42}, rng) == 42);
  CHECK_THROWS_AS(select_random(std::vector<Id>{}, rng), EmptyPoolError);

  const std::vector<Id> four = {3, 8, 9, 20};
  Rng a(55), b(55);
  for (int i = 0; i < 100; ++i) CHECK(select_random(four, a) == select_random(four, b));

  std::map<Id, int> counts;
  Rng draws(2024);
  for (int i = 0; i < 10000; ++i) ++counts[select_random(four, draws)];
  for (const Id id : four) CHECK(std::abs(counts[id] / 10000.0 - 0.25) <= 0.02);
}

TEST_CASE("selectors return unlabelled ids, are pure, and ignore candidate order") {
  const Dataset ds = make_synthetic(hidden_cluster_spec(12, 6));
  const Dataset ds_before = ds;
  const TrainHyper hyper{40, 0.1, 1e-3, 0};
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Id> ids = range_ids(0, ds.size());
    for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[rng.index(i)]);
    std::vector<Id> labeled(ids.begin(), ids.begin() + 6);
    std::vector<Id> unlabeled(ids.begin() + 6, ids.end());
    std::sort(labeled.begin(), labeled.end());
    const Hypothesis h = train(ds, labeled, hyper);
    const Hypothesis h_before = h;

    std::vector<Id> sorted_u = unlabeled;
    std::sort(sorted_u.begin(), sorted_u.end());
    const Id us = select_uncertainty(h, ds, unlabeled);
    const Id wd = select_density_weighted(h, ds, unlabeled, 1.0);
    const Id qbc = select_qbc(ds, labeled, unlabeled, 4, 99, hyper);
    CHECK(us == select_uncertainty(h, ds, sorted_u));
    CHECK(wd == select_density_weighted(h, ds, sorted_u, 1.0));
    CHECK(qbc == select_qbc(ds, labeled, sorted_u, 4, 99, hyper));
    for (const Id chosen : {us, wd, qbc}) {
      CHECK(std::binary_search(sorted_u.begin(), sorted_u.end(), chosen));
      CHECK_FALSE(std::binary_search(labeled.begin(), labeled.end(), chosen));
    }
    CHECK(h.weights == h_before.weights);
  }
  CHECK(ds.features == ds_before.features);
}

TEST_CASE("strategy names") {
  CHECK(parse_strategy("US") == StrategyKind::Uncertainty);
  CHECK(parse_strategy("qbc") == StrategyKind::Committee);
  CHECK(parse_strategy("CBQ") == StrategyKind::Committee);
  CHECK(parse_strategy("wd") == StrategyKind::DensityWeighted);
  CHECK(parse_strategy("random") == StrategyKind::Random);
  CHECK_THROWS_AS(parse_strategy("eer"), ValidationError);
  CHECK_THROWS_AS((StrategyConfig{StrategyKind::Committee, 1, 1.0}.validate()), ValidationError);
  CHECK_THROWS_AS((StrategyConfig{StrategyKind::DensityWeighted, 5, -1.0}.validate()),
                  ValidationError);
}
