#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "egactive/dataset.hpp"
#include "egactive/model.hpp"
#include "egactive/pool.hpp"
#include "egactive/rng.hpp"

namespace egactive {

enum class StrategyKind { Uncertainty, Committee, DensityWeighted, Random };

struct StrategyConfig {
  StrategyKind kind = StrategyKind::Uncertainty;
  std::size_t committee_size = 5;
  double density_exponent = 1.0;

  void validate() const;
};

/// Accepts us | qbc | wd | random (case-insensitive; "cbq" and "committee"
/// are aliases for qbc).
StrategyKind parse_strategy(std::string_view name);
/// Display label used in curve names: US, QBC, WD, random.
std::string strategy_label(StrategyKind kind);
/// Config spelling: us, qbc, wd, random.
std::string strategy_key(StrategyKind kind);

/// Shannon entropy in nats, with 0 log 0 = 0.
double entropy(std::span<const double> probabilities);

/// Vote entropy -sum_c (V_c/K) log(V_c/K) of a committee vote histogram.
double vote_entropy(std::span<const std::size_t> votes);

/// Highest predictive entropy over `unlabeled`; ties to the lowest id.
Id select_uncertainty(const Hypothesis& h, const Dataset& dataset,
                      std::span<const Id> unlabeled);

/// Bootstrap committee of `committee_size` models on `labeled`; highest vote
/// entropy over `unlabeled`, ties to the lowest id. Member m resamples with
/// Rng(derive_seed(seed, m)).
Id select_qbc(const Dataset& dataset, std::span<const Id> labeled,
              std::span<const Id> unlabeled, std::size_t committee_size,
              std::uint64_t seed, const TrainHyper& hyper);

/// Entropy times (mean cosine similarity to U)^exponent. Negative mean
/// similarity is clamped to 0 so fractional exponents stay real.
Id select_density_weighted(const Hypothesis& h, const Dataset& dataset,
                           std::span<const Id> unlabeled, double density_exponent);

/// Mean cosine similarity of each candidate to every member of `unlabeled`
/// (itself included), clamped below at 0. Zero-norm vectors contribute 0.
std::vector<double> density_scores(const Dataset& dataset, std::span<const Id> unlabeled);

/// Uniform over `unlabeled` in its stored order.
Id select_random(std::span<const Id> unlabeled, Rng& rng);

/// Runs the configured strategy against the current pool. Committee seeds
/// and random picks come from `select_rng`.
Id select_query(const StrategyConfig& strategy, const Hypothesis& h, const Dataset& dataset,
                const PoolState& pool, const TrainHyper& hyper, Rng& select_rng);

}  // namespace egactive
