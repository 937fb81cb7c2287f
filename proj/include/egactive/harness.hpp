#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "egactive/config.hpp"
#include "egactive/dataset.hpp"
#include "egactive/eg_meta.hpp"
#include "egactive/explore.hpp"
#include "egactive/model.hpp"
#include "egactive/strategies.hpp"

namespace egactive {

/// Comparison groups: the bare strategy, a constant exploration rate,
/// multiplicative adaptation of the rate, and EG-Active.
enum class Group { Pure, FixedEpsilon, Adaptive, EG };

Group parse_group(const std::string& name);
std::string group_key(Group group);

/// regret = test error minus the full-label skyline's test error;
/// error = raw test error.
enum class Metric { Regret, Error };

struct DatasetSource {
  std::optional<std::filesystem::path> csv;
  std::optional<SyntheticSpec> synthetic;

  bool empty() const { return !csv && !synthetic; }
  Dataset materialize() const;
};

struct ExperimentConfig {
  DatasetSource source;
  Group group = Group::Pure;
  StrategyConfig strategy;
  std::size_t budget = 2000;
  std::size_t checkpoint_every = 100;
  std::size_t replicates = 1;
  std::uint64_t base_seed = 0;
  std::size_t init_labeled_per_class = 1;
  double test_fraction = 0.2;
  TrainHyper model;
  /// Exploitation probability of the wrapper for the fixed group.
  double epsilon = 0.5;
  AdaptiveP adaptive;
  EGConfig eg;
  Metric metric = Metric::Regret;
  std::size_t threads = 1;

  void validate() const;
  /// Curve label: random, US, 0.5-US, P-US, EG-Active(US).
  std::string label() const;
  /// File-name form of the label.
  std::string slug() const;

  /// Reads every known key; unknown keys are a validation error.
  static ExperimentConfig from_config(const Config& config);
  /// All settings, fully resolved, in the same key space.
  Config to_config() const;
};

/// Applies a curve label (see ExperimentConfig::label) to `config`.
void apply_curve_label(ExperimentConfig& config, const std::string& label);

struct Checkpoint {
  std::size_t iteration = 0;
  double test_error = 0.0;
  double regret = 0.0;
  double mean_reward_since_last = 0.0;
  std::vector<double> p_snapshot;  // EG group only
};

struct RegretTrace {
  std::vector<Checkpoint> checkpoints;
  std::size_t steps = 0;
  bool truncated = false;

  double average_regret() const;
};

struct ReplicateRun {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  double skyline_error = 0.0;
  RegretTrace trace;
  std::optional<EGState> eg_state;  // final state, EG group only
  /// JSON-lines event log, one object per line.
  std::vector<std::string> events;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ReplicateRun> runs;
};

/// One replicate with seed base_seed + replicate.
ReplicateRun run_replicate(const Dataset& dataset, const ExperimentConfig& config,
                           std::size_t replicate);

ExperimentResult run_experiment(const Dataset& dataset, const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config);

struct CurvePoint {
  std::size_t iteration = 0;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};

struct Curve {
  std::string label;
  std::string slug;
  Group group = Group::Pure;
  StrategyKind strategy = StrategyKind::Random;
  std::vector<CurvePoint> points;
  double average_regret = 0.0;     // mean over replicates of per-trace averages
  double average_regret_sd = 0.0;  // sample SD of the same
  std::optional<double> factor;    // baseline average / this average
  std::size_t replicates = 0;
};

struct ComparisonReport {
  std::vector<Curve> curves;
  std::optional<std::size_t> baseline;  // index of the pure random curve
};

/// Aggregates completed experiments. Every result must share budget,
/// checkpoints and replicate count.
ComparisonReport aggregate(const std::vector<ExperimentResult>& results);

struct ComparisonResult {
  ComparisonReport report;
  std::vector<ExperimentResult> results;
};

/// Runs every configuration with common random numbers and aggregates.
ComparisonResult run_comparison(const std::vector<ExperimentConfig>& suite);

/// Reads a suite: shared settings plus `curves = random, US, EG-Active(US), ...`.
std::vector<ExperimentConfig> suite_from_config(const Config& config);

/// Writes events/<slug>_rep<r>.jsonl, curve_<slug>.csv, summary.csv and
/// resolved_config.txt under `out_dir`. Returns the paths written.
std::vector<std::filesystem::path> emit_results(const ComparisonReport& report,
                                                const std::vector<ExperimentResult>& results,
                                                const std::filesystem::path& out_dir);

/// Reads back a curve CSV written by emit_results.
std::vector<CurvePoint> read_curve_csv(const std::filesystem::path& path);

}  // namespace egactive
