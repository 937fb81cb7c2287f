#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "egactive/dataset.hpp"

namespace egactive {

struct QueryRecord {
  std::size_t iteration;  // 1-based oracle call number
  Id id;
};

/// Labelled / unlabelled partition of the pool ids. Both id lists are kept
/// sorted so selectors iterate in id order.
struct PoolState {
  std::vector<Id> labeled;
  std::vector<Id> unlabeled;
  std::vector<QueryRecord> query_log;

  bool is_labeled(Id id) const;
  bool is_unlabeled(Id id) const;
  /// L ∪ U in ascending id order.
  std::vector<Id> pool_ids() const;
  std::size_t pool_size() const { return labeled.size() + unlabeled.size(); }
};

/// Simulated labelling oracle answering from the dataset's own labels.
class Oracle {
 public:
  static constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

  Oracle(std::vector<ClassIndex> hidden_labels, std::size_t budget = kUnlimited)
      : hidden_(std::move(hidden_labels)), budget_(budget) {}

  std::size_t query_count() const { return query_count_; }
  std::size_t budget() const { return budget_; }
  void set_budget(std::size_t budget) { budget_ = budget; }
  bool exhausted() const { return query_count_ >= budget_; }

 private:
  friend ClassIndex query_oracle(PoolState&, Oracle&, Id);
  std::vector<ClassIndex> hidden_;
  std::size_t budget_;
  std::size_t query_count_ = 0;
};

struct PoolSplit {
  PoolState pool;
  std::vector<Id> test_ids;  // sorted
  Oracle oracle;
};

/// Stratified test split followed by a stratified initial labelled set of
/// `init_labeled_per_class` ids per class. Deterministic in `seed`.
PoolSplit split_pool(const Dataset& dataset, std::uint64_t seed,
                     std::size_t init_labeled_per_class, double test_fraction);

/// Moves `id` from U to L and returns its label. Throws DuplicateQueryError
/// for an id already in L, UnknownIdError for an id outside the pool and
/// BudgetExhaustedError once the oracle's budget is spent.
ClassIndex query_oracle(PoolState& pool, Oracle& oracle, Id id);

}  // namespace egactive
