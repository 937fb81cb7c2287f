#include "egactive/pool.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "egactive/error.hpp"
#include "egactive/rng.hpp"

namespace egactive {

bool PoolState::is_labeled(Id id) const {
  return std::binary_search(labeled.begin(), labeled.end(), id);
}

bool PoolState::is_unlabeled(Id id) const {
  return std::binary_search(unlabeled.begin(), unlabeled.end(), id);
}

std::vector<Id> PoolState::pool_ids() const {
  std::vector<Id> ids;
  ids.reserve(pool_size());
  std::merge(labeled.begin(), labeled.end(), unlabeled.begin(), unlabeled.end(),
             std::back_inserter(ids));
  return ids;
}

PoolSplit split_pool(const Dataset& dataset, std::uint64_t seed,
                     std::size_t init_labeled_per_class, double test_fraction) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ValidationError("test_fraction must lie in (0, 1)");
  }
  const std::size_t n = dataset.size();
  const std::size_t num_classes = dataset.num_classes;

  std::vector<std::vector<Id>> by_class(num_classes);
  for (Id id = 0; id < n; ++id) by_class[dataset.labels[id]].push_back(id);

  Rng rng(seed);
  for (auto& ids : by_class) {
    for (std::size_t i = ids.size(); i > 1; --i) {
      std::swap(ids[i - 1], ids[rng.index(i)]);
    }
  }

  // Largest-remainder apportionment keeps the total at round(f * n).
  const auto total_test = static_cast<std::size_t>(std::llround(test_fraction * n));
  std::vector<std::size_t> test_count(num_classes);
  std::vector<double> remainder(num_classes);
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    const double exact = test_fraction * static_cast<double>(by_class[c].size());
    test_count[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - std::floor(exact);
    assigned += test_count[c];
  }
  std::vector<std::size_t> order(num_classes);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < total_test && i < num_classes; ++i) {
    ++test_count[order[i]];
    ++assigned;
  }
  if (assigned == 0) throw ValidationError("test split is empty; raise test_fraction");

  PoolSplit split{PoolState{}, {}, Oracle(dataset.labels)};
  for (std::size_t c = 0; c < num_classes; ++c) {
    const auto& ids = by_class[c];
    const std::size_t available = ids.size() - test_count[c];
    if (available < init_labeled_per_class) {
      throw ValidationError("class " + std::to_string(c) + " has " +
                            std::to_string(available) +
                            " pool examples after the test split but " +
                            std::to_string(init_labeled_per_class) +
                            " initial labels were requested (short by " +
                            std::to_string(init_labeled_per_class - available) + ")");
    }
    auto it = ids.begin();
    split.test_ids.insert(split.test_ids.end(), it, it + test_count[c]);
    it += test_count[c];
    split.pool.labeled.insert(split.pool.labeled.end(), it, it + init_labeled_per_class);
    it += init_labeled_per_class;
    split.pool.unlabeled.insert(split.pool.unlabeled.end(), it, ids.end());
  }
  std::sort(split.test_ids.begin(), split.test_ids.end());
  std::sort(split.pool.labeled.begin(), split.pool.labeled.end());
  std::sort(split.pool.unlabeled.begin(), split.pool.unlabeled.end());
  return split;
}

ClassIndex query_oracle(PoolState& pool, Oracle& oracle, Id id) {
  if (pool.is_labeled(id)) {
    throw DuplicateQueryError("id " + std::to_string(id) + " was already queried");
  }
  const auto it = std::lower_bound(pool.unlabeled.begin(), pool.unlabeled.end(), id);
  if (it == pool.unlabeled.end() || *it != id || id >= oracle.hidden_.size()) {
    throw UnknownIdError("id " + std::to_string(id) + " is not in the pool");
  }
  if (oracle.exhausted()) {
    throw BudgetExhaustedError("oracle budget of " + std::to_string(oracle.budget_) +
                               " queries is spent");
  }
  pool.unlabeled.erase(it);
  pool.labeled.insert(std::lower_bound(pool.labeled.begin(), pool.labeled.end(), id), id);
  ++oracle.query_count_;
  pool.query_log.push_back({oracle.query_count_, id});
  return oracle.hidden_[id];
}

}  // namespace egactive
