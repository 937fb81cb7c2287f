#include "egactive/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "egactive/error.hpp"
#include "egactive/pool.hpp"

namespace egactive {
namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

/// Builds one flat JSON object with keys in insertion order.
class JsonLine {
 public:
  JsonLine& add(const std::string& key, const std::string& raw) {
    text_ += (text_.empty() ? "{" : ",");
    text_ += "\"" + key + "\":" + raw;
    return *this;
  }
  JsonLine& str(const std::string& key, const std::string& value) {
    return add(key, "\"" + value + "\"");
  }
  JsonLine& real(const std::string& key, double value) {
    return add(key, std::isfinite(value) ? format_real(value) : "null");
  }
  JsonLine& integer(const std::string& key, std::size_t value) {
    return add(key, std::to_string(value));
  }
  JsonLine& boolean(const std::string& key, bool value) {
    return add(key, value ? "true" : "false");
  }
  JsonLine& null(const std::string& key) { return add(key, "null"); }
  JsonLine& reals(const std::string& key, const std::vector<double>& values) {
    std::string raw = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) raw += ",";
      raw += format_real(values[i]);
    }
    return add(key, raw + "]");
  }
  std::string done() const { return text_ + "}"; }

 private:
  std::string text_;
};

std::string render_centers(const std::vector<std::vector<double>>& centers) {
  std::string out;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    if (k) out += "; ";
    for (std::size_t j = 0; j < centers[k].size(); ++j) {
      if (j) out += ",";
      out += format_exact(centers[k][j]);
    }
  }
  return out;
}

template <typename T>
std::string render_list(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>) {
      out += format_exact(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "dataset", "synthetic.preset", "synthetic.per_cluster", "synthetic.sizes",
      "synthetic.seed", "synthetic.spread", "synthetic.centers", "synthetic.classes",
      "synthetic.dim", "group", "strategy", "budget", "checkpoint_every", "replicates",
      "seed", "split.init_labeled_per_class", "split.test_fraction", "model.epochs",
      "model.step", "model.l2", "explore.epsilon", "explore.exploration_rate",
      "explore.adaptive.lambda", "explore.adaptive.p_min", "explore.adaptive.p_max",
      "explore.adaptive.p_init", "qbc.committee_size", "wd.exponent", "eg.candidates",
      "eg.tau", "eg.beta", "eg.kappa", "eg.iterations", "eg.literal_smoothing", "metric",
      "threads", "out", "curves"};
  return keys;
}

std::optional<SyntheticSpec> synthetic_from_config(const Config& config) {
  bool any = false;
  for (const auto& [key, value] : config.values()) {
    if (key.rfind("synthetic.", 0) == 0) any = true;
  }
  if (!any) return std::nullopt;

  const std::string preset = lowercase(config.get_string("synthetic.preset", "hidden_cluster"));
  const std::size_t per_cluster = config.get_size("synthetic.per_cluster", 250);
  const std::uint64_t seed = config.get_u64("synthetic.seed", 0);
  SyntheticSpec spec;
  if (preset == "hidden_cluster") {
    spec = hidden_cluster_spec(per_cluster, seed);
  } else if (preset == "two_gaussian") {
    spec = two_gaussian_spec(per_cluster, seed);
  } else if (preset == "custom") {
    spec.per_cluster = per_cluster;
    spec.seed = seed;
    spec.spread = 1.0;
  } else {
    throw ValidationError("synthetic.preset: unknown preset '" + preset +
                          "' (hidden_cluster | two_gaussian | custom)");
  }
  if (const auto centers = config.get("synthetic.centers")) {
    spec.centers.clear();
    for (const auto& point : split_list(*centers, ';')) {
      Config single;
      single.set("synthetic.centers", point);
      spec.centers.push_back(single.get_doubles("synthetic.centers", {}));
    }
    spec.dim = spec.centers.empty() ? 0 : spec.centers.front().size();
    if (!config.has("synthetic.sizes")) spec.cluster_sizes.clear();
  }
  if (const auto classes = config.get("synthetic.classes")) {
    spec.class_of_cluster.clear();
    for (const auto& item : split_list(*classes, ',')) {
      Config single;
      single.set("synthetic.classes", item);
      spec.class_of_cluster.push_back(single.get_size("synthetic.classes", 0));
    }
  }
  if (const auto sizes = config.get("synthetic.sizes")) {
    spec.cluster_sizes.clear();
    for (const auto& item : split_list(*sizes, ',')) {
      Config single;
      single.set("synthetic.sizes", item);
      spec.cluster_sizes.push_back(single.get_size("synthetic.sizes", 0));
    }
  } else if (config.has("synthetic.per_cluster") && preset != "hidden_cluster") {
    spec.cluster_sizes.clear();
  }
  spec.dim = config.get_size("synthetic.dim", spec.dim);
  spec.spread = config.get_double("synthetic.spread", spec.spread);
  return spec;
}

double sample_sd(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double sq = 0.0;
  for (const double v : values) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / static_cast<double>(values.size() - 1));
}

double mean_of(const std::vector<double>& values) {
  double total = 0.0;
  for (const double v : values) total += v;
  return values.empty() ? 0.0 : total / static_cast<double>(values.size());
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

/// Settings that must agree across a comparison suite.
std::string shared_signature(const ExperimentConfig& config) {
  Config c = config.to_config();
  for (const char* key : {"group", "strategy", "explore.epsilon", "explore.adaptive.lambda",
                          "explore.adaptive.p_min", "explore.adaptive.p_max", "explore.adaptive.p_init",
                          "qbc.committee_size", "wd.exponent", "eg.candidates", "eg.tau",
                          "eg.beta", "eg.kappa", "eg.literal_smoothing", "threads"}) {
    c.erase(key);
  }
  return c.render();
}

}  // namespace

Group parse_group(const std::string& name) {
  const std::string lower = lowercase(name);
  if (lower == "pure") return Group::Pure;
  if (lower == "fixed_eps" || lower == "fixed") return Group::FixedEpsilon;
  if (lower == "adaptive") return Group::Adaptive;
  if (lower == "eg" || lower == "eg_active") return Group::EG;
  throw ValidationError("unknown group '" + name + "' (pure | fixed_eps | adaptive | eg)");
}

std::string group_key(Group group) {
  switch (group) {
    case Group::Pure: return "pure";
    case Group::FixedEpsilon: return "fixed_eps";
    case Group::Adaptive: return "adaptive";
    case Group::EG: return "eg";
  }
  return "?";
}

Dataset DatasetSource::materialize() const {
  if (csv && synthetic) throw ValidationError("give either a dataset file or a synthetic spec");
  if (csv) return load_dataset(*csv);
  if (synthetic) return make_synthetic(*synthetic);
  throw ValidationError("no dataset given");
}

void ExperimentConfig::validate() const {
  if (source.empty()) throw ValidationError("no dataset given");
  if (source.csv && source.synthetic) {
    throw ValidationError("give either a dataset file or a synthetic spec");
  }
  if (budget == 0) throw ValidationError("budget must be positive");
  if (checkpoint_every == 0) throw ValidationError("checkpoint_every must be positive");
  if (budget < checkpoint_every) throw ValidationError("budget must be at least checkpoint_every");
  if (replicates == 0) throw ValidationError("replicates must be at least 1");
  if (threads == 0) throw ValidationError("threads must be at least 1");
  if (model.epochs == 0) throw ValidationError("model.epochs must be positive");
  if (!(model.step > 0.0)) throw ValidationError("model.step must be positive");
  if (!(model.l2 >= 0.0)) throw ValidationError("model.l2 must be non-negative");
  strategy.validate();
  if (strategy.kind == StrategyKind::Random && group != Group::Pure) {
    throw ValidationError("group '" + group_key(group) +
                          "' needs a base strategy other than random");
  }
  if (group == Group::FixedEpsilon && !(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ValidationError("explore.epsilon must lie in [0, 1]");
  }
  if (group == Group::Adaptive) adaptive.validate();
  if (group == Group::EG) {
    eg.validate();
    if (eg.iterations != budget) {
      throw ValidationError("eg.iterations must equal budget");
    }
  }
}

std::string ExperimentConfig::label() const {
  const std::string strat = strategy_label(strategy.kind);
  switch (group) {
    case Group::Pure: return strat;
    case Group::FixedEpsilon: return format_real(1.0 - epsilon) + "-" + strat;
    case Group::Adaptive: return "P-" + strat;
    case Group::EG: return "EG-Active(" + strat + ")";
  }
  return strat;
}

std::string ExperimentConfig::slug() const {
  const std::string strat = strategy_key(strategy.kind);
  switch (group) {
    case Group::Pure: return "pure_" + strat;
    case Group::FixedEpsilon: return "fixed_" + format_real(1.0 - epsilon) + "_" + strat;
    case Group::Adaptive: return "adaptive_" + strat;
    case Group::EG: return "eg_" + strat;
  }
  return strat;
}

ExperimentConfig ExperimentConfig::from_config(const Config& config) {
  for (const auto& [key, value] : config.values()) {
    if (!known_keys().count(key)) throw ValidationError("unknown config key '" + key + "'");
  }
  ExperimentConfig out;
  if (const auto path = config.get("dataset"); path && !path->empty()) out.source.csv = *path;
  out.source.synthetic = synthetic_from_config(config);
  out.group = parse_group(config.get_string("group", "pure"));
  out.strategy.kind = parse_strategy(config.get_string("strategy", "us"));
  out.strategy.committee_size = config.get_size("qbc.committee_size", 5);
  out.strategy.density_exponent = config.get_double("wd.exponent", 1.0);
  out.budget = config.get_size("budget", 2000);
  out.checkpoint_every = config.get_size("checkpoint_every", 100);
  out.replicates = config.get_size("replicates", 1);
  out.base_seed = config.get_u64("seed", 0);
  out.init_labeled_per_class = config.get_size("split.init_labeled_per_class", 1);
  out.test_fraction = config.get_double("split.test_fraction", 0.2);
  out.model.epochs = config.get_size("model.epochs", 200);
  out.model.step = config.get_double("model.step", 0.1);
  out.model.l2 = config.get_double("model.l2", 1e-3);
  if (config.has("explore.epsilon") && config.has("explore.exploration_rate")) {
    throw ValidationError("set explore.epsilon or explore.exploration_rate, not both");
  }
  out.epsilon = config.has("explore.exploration_rate")
                    ? epsilon_for_exploration_rate(config.get_double("explore.exploration_rate", 0.5))
                    : config.get_double("explore.epsilon", 0.5);
  out.adaptive.lambda = config.get_double("explore.adaptive.lambda", 2.0);
  out.adaptive.p_min = config.get_double("explore.adaptive.p_min", 0.01);
  out.adaptive.p_max = config.get_double("explore.adaptive.p_max", 0.99);
  out.adaptive.p_explore = config.get_double("explore.adaptive.p_init", 0.5);
  out.eg.candidates = config.get_doubles("eg.candidates", EGConfig::default_grid());
  out.eg.tau = config.get_double("eg.tau", 0.1);
  out.eg.beta = config.get_double("eg.beta", 0.01);
  out.eg.kappa = config.get_double("eg.kappa", 0.1);
  out.eg.iterations = config.get_size("eg.iterations", out.budget);
  out.eg.literal_smoothing = config.get_bool("eg.literal_smoothing", false);
  const std::string metric = lowercase(config.get_string("metric", "regret"));
  if (metric == "regret") {
    out.metric = Metric::Regret;
  } else if (metric == "error") {
    out.metric = Metric::Error;
  } else {
    throw ValidationError("metric must be regret or error");
  }
  out.threads = config.get_size("threads", 1);
  return out;
}

Config ExperimentConfig::to_config() const {
  Config c;
  if (source.csv) c.set("dataset", source.csv->string());
  if (source.synthetic) {
    const SyntheticSpec& s = *source.synthetic;
    c.set("synthetic.preset", "custom");
    c.set("synthetic.centers", render_centers(s.centers));
    c.set("synthetic.classes", render_list(s.class_of_cluster));
    std::vector<std::size_t> sizes;
    for (std::size_t k = 0; k < s.num_clusters(); ++k) sizes.push_back(s.size_of(k));
    c.set("synthetic.sizes", render_list(sizes));
    c.set("synthetic.per_cluster", std::to_string(s.per_cluster));
    c.set("synthetic.dim", std::to_string(s.dim));
    c.set("synthetic.spread", format_exact(s.spread));
    c.set("synthetic.seed", std::to_string(s.seed));
  }
  c.set("group", group_key(group));
  c.set("strategy", strategy_key(strategy.kind));
  c.set("qbc.committee_size", std::to_string(strategy.committee_size));
  c.set("wd.exponent", format_exact(strategy.density_exponent));
  c.set("budget", std::to_string(budget));
  c.set("checkpoint_every", std::to_string(checkpoint_every));
  c.set("replicates", std::to_string(replicates));
  c.set("seed", std::to_string(base_seed));
  c.set("split.init_labeled_per_class", std::to_string(init_labeled_per_class));
  c.set("split.test_fraction", format_exact(test_fraction));
  c.set("model.epochs", std::to_string(model.epochs));
  c.set("model.step", format_exact(model.step));
  c.set("model.l2", format_exact(model.l2));
  c.set("explore.epsilon", format_exact(epsilon));
  c.set("explore.adaptive.lambda", format_exact(adaptive.lambda));
  c.set("explore.adaptive.p_min", format_exact(adaptive.p_min));
  c.set("explore.adaptive.p_max", format_exact(adaptive.p_max));
  c.set("explore.adaptive.p_init", format_exact(adaptive.p_explore));
  c.set("eg.candidates", render_list(eg.candidates));
  c.set("eg.tau", format_exact(eg.tau));
  c.set("eg.beta", format_exact(eg.beta));
  c.set("eg.kappa", format_exact(eg.kappa));
  c.set("eg.iterations", std::to_string(eg.iterations));
  c.set("eg.literal_smoothing", eg.literal_smoothing ? "true" : "false");
  c.set("metric", metric == Metric::Regret ? "regret" : "error");
  c.set("threads", std::to_string(threads));
  return c;
}

void apply_curve_label(ExperimentConfig& config, const std::string& label) {
  const std::string lower = lowercase(label);
  const std::string eg_prefix = "eg-active(";
  if (lower == "random") {
    config.group = Group::Pure;
    config.strategy.kind = StrategyKind::Random;
  } else if (lower.rfind(eg_prefix, 0) == 0 && lower.back() == ')') {
    config.group = Group::EG;
    config.strategy.kind =
        parse_strategy(lower.substr(eg_prefix.size(), lower.size() - eg_prefix.size() - 1));
  } else if (lower.rfind("p-", 0) == 0) {
    config.group = Group::Adaptive;
    config.strategy.kind = parse_strategy(lower.substr(2));
  } else if (const auto dash = lower.find('-'); dash != std::string::npos) {
    Config single;
    single.set("curve exploration rate", lower.substr(0, dash));
    config.group = Group::FixedEpsilon;
    config.epsilon =
        epsilon_for_exploration_rate(single.get_double("curve exploration rate", 0.0));
    config.strategy.kind = parse_strategy(lower.substr(dash + 1));
  } else {
    config.group = Group::Pure;
    config.strategy.kind = parse_strategy(lower);
  }
}

double RegretTrace::average_regret() const {
  if (checkpoints.empty()) return 0.0;
  double total = 0.0;
  for (const auto& c : checkpoints) total += c.regret;
  return total / static_cast<double>(checkpoints.size());
}

ReplicateRun run_replicate(const Dataset& dataset, const ExperimentConfig& config,
                           std::size_t replicate) {
  ReplicateRun run;
  run.replicate = replicate;
  run.seed = config.base_seed + replicate;

  PoolSplit split = split_pool(dataset, run.seed, config.init_labeled_per_class,
                               config.test_fraction);
  split.oracle.set_budget(config.budget);
  TrainHyper hyper = config.model;
  hyper.seed = run.seed;
  const Hypothesis skyline = train(dataset, split.pool.pool_ids(), hyper);
  run.skyline_error = evaluate(skyline, dataset, split.test_ids);
  const std::vector<Id> test_ids = split.test_ids;

  ActiveLearner learner = ActiveLearner::start(dataset, std::move(split.pool),
                                               std::move(split.oracle), hyper, config.strategy,
                                               run.seed);
  run.events.push_back(JsonLine()
                           .str("type", "run")
                           .str("curve", config.label())
                           .integer("replicate", replicate)
                           .integer("seed", run.seed)
                           .real("skyline_error", run.skyline_error)
                           .done());

  EGState eg_state;
  if (config.group == Group::EG) eg_state = init_eg(config.eg);
  AdaptiveP adaptive = config.adaptive;

  double reward_sum = 0.0;
  std::size_t reward_count = 0;
  auto checkpoint = [&](std::size_t iteration) {
    Checkpoint c;
    c.iteration = iteration;
    c.test_error = evaluate(learner.model, dataset, test_ids);
    c.regret = config.metric == Metric::Regret ? c.test_error - run.skyline_error : c.test_error;
    c.mean_reward_since_last = reward_count ? reward_sum / static_cast<double>(reward_count) : 0.0;
    if (config.group == Group::EG) c.p_snapshot = eg_state.probs;
    reward_sum = 0.0;
    reward_count = 0;
    JsonLine line;
    line.str("type", "checkpoint")
        .integer("iteration", c.iteration)
        .real("test_error", c.test_error)
        .real("regret", c.regret)
        .real("mean_reward", c.mean_reward_since_last);
    if (config.group == Group::EG) line.reals("p", c.p_snapshot);
    run.events.push_back(line.done());
    run.trace.checkpoints.push_back(std::move(c));
  };

  for (std::size_t i = 1; i <= config.budget; ++i) {
    if (learner.pool.unlabeled.empty()) {
      run.trace.truncated = true;
      break;
    }
    std::optional<std::size_t> arm;
    StepResult step;
    switch (config.group) {
      case Group::Pure:
        step = base_strategy_step(learner);
        break;
      case Group::FixedEpsilon:
        step = epsilon_active_step(learner, config.epsilon);
        break;
      case Group::Adaptive:
        step = epsilon_active_step(learner, 1.0 - adaptive.p_explore);
        // Only exploratory queries feed back into the exploration rate.
        if (!step.outcome.used_base_strategy) {
          adaptive = adaptive_exploration_step(adaptive, step.reward.r_value);
        }
        break;
      case Group::EG:
        arm = sample_arm(eg_state, learner.rngs.meta);
        step = epsilon_active_step(learner, config.eg.candidates[*arm]);
        eg_state = update_eg(eg_state, *arm, step.reward.r_value, config.eg);
        break;
    }
    run.trace.steps = i;
    reward_sum += step.reward.r_value;
    ++reward_count;

    JsonLine line;
    line.str("type", "step")
        .integer("iteration", i)
        .integer("id", step.outcome.chosen_id);
    if (config.group == Group::Pure) {
      line.null("q");
    } else {
      line.real("q", step.outcome.q);
    }
    line.real("epsilon", step.outcome.epsilon_used);
    if (arm) {
      line.integer("arm", *arm);
    } else {
      line.null("arm");
    }
    line.boolean("explored", !step.outcome.used_base_strategy)
        .real("d", step.reward.d_value)
        .real("r", step.reward.r_value)
        .boolean("degenerate", step.reward.degenerate);
    if (config.group == Group::Adaptive) line.real("p_explore", adaptive.p_explore);
    run.events.push_back(line.done());

    if (i % config.checkpoint_every == 0) checkpoint(i);
  }
  const std::size_t last = run.trace.checkpoints.empty() ? 0 : run.trace.checkpoints.back().iteration;
  if (run.trace.steps > last) checkpoint(run.trace.steps);
  if (config.group == Group::EG) run.eg_state = eg_state;
  if (run.trace.truncated) {
    run.events.push_back(
        JsonLine().str("type", "truncated").integer("steps", run.trace.steps).done());
  }
  return run;
}

ExperimentResult run_experiment(const Dataset& dataset, const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.runs.resize(config.replicates);

  const std::size_t workers = std::min(config.threads, config.replicates);
  if (workers <= 1) {
    for (std::size_t r = 0; r < config.replicates; ++r) {
      result.runs[r] = run_replicate(dataset, config, r);
    }
    return result;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(config.replicates);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < config.replicates; r = next++) {
          try {
            result.runs[r] = run_replicate(dataset, config, r);
          } catch (...) {
            failures[r] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Dataset dataset = config.source.materialize();
  return run_experiment(dataset, config);
}

ComparisonReport aggregate(const std::vector<ExperimentResult>& results) {
  ComparisonReport report;
  if (results.empty()) return report;
  const auto& first = results.front().config;
  std::set<std::string> slugs;
  for (const auto& result : results) {
    const auto& c = result.config;
    if (c.budget != first.budget || c.checkpoint_every != first.checkpoint_every ||
        c.replicates != first.replicates) {
      throw ValidationError("suite members disagree on budget, checkpoints or replicates");
    }
    if (result.runs.size() != c.replicates) {
      throw ValidationError("curve " + c.label() + " has incomplete replicates");
    }
    if (!slugs.insert(c.slug()).second) {
      throw ValidationError("curve " + c.label() + " appears twice in the suite");
    }
  }

  for (const auto& result : results) {
    Curve curve;
    curve.label = result.config.label();
    curve.slug = result.config.slug();
    curve.group = result.config.group;
    curve.strategy = result.config.strategy.kind;
    curve.replicates = result.runs.size();

    std::map<std::size_t, std::vector<double>> by_iteration;
    std::vector<double> averages;
    for (const auto& run : result.runs) {
      for (const auto& c : run.trace.checkpoints) by_iteration[c.iteration].push_back(c.regret);
      averages.push_back(run.trace.average_regret());
    }
    for (const auto& [iteration, values] : by_iteration) {
      const double mean = mean_of(values);
      curve.points.push_back({iteration, mean, sample_sd(values, mean), values.size()});
    }
    curve.average_regret = mean_of(averages);
    curve.average_regret_sd = sample_sd(averages, curve.average_regret);
    if (!report.baseline && curve.group == Group::Pure &&
        curve.strategy == StrategyKind::Random) {
      report.baseline = report.curves.size();
    }
    report.curves.push_back(std::move(curve));
  }
  if (report.baseline) {
    const double base = report.curves[*report.baseline].average_regret;
    for (auto& curve : report.curves) {
      if (curve.average_regret == base) {
        curve.factor = 1.0;
      } else {
        curve.factor = base / curve.average_regret;
      }
    }
  }
  return report;
}

ComparisonResult run_comparison(const std::vector<ExperimentConfig>& suite) {
  if (suite.empty()) throw ValidationError("comparison suite is empty");
  const std::string signature = shared_signature(suite.front());
  for (const auto& config : suite) {
    config.validate();
    if (shared_signature(config) != signature) {
      throw ValidationError("curve " + config.label() +
                            " does not share the suite's dataset, budget, seeds or split");
    }
  }
  const Dataset dataset = suite.front().source.materialize();
  ComparisonResult out;
  for (const auto& config : suite) out.results.push_back(run_experiment(dataset, config));
  out.report = aggregate(out.results);
  return out;
}

std::vector<ExperimentConfig> suite_from_config(const Config& config) {
  const auto curves = config.get("curves");
  if (!curves || split_list(*curves, ',').empty()) {
    throw ValidationError("suite needs 'curves = <label>, <label>, ...'");
  }
  Config shared = config;
  shared.erase("curves");
  const ExperimentConfig base = ExperimentConfig::from_config(shared);
  std::vector<ExperimentConfig> suite;
  for (const auto& label : split_list(*curves, ',')) {
    ExperimentConfig member = base;
    apply_curve_label(member, label);
    suite.push_back(member);
  }
  return suite;
}

std::vector<std::filesystem::path> emit_results(const ComparisonReport& report,
                                                const std::vector<ExperimentResult>& results,
                                                const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir / "events", ec);
  if (ec) throw IoError("cannot create " + (out_dir / "events").string() + ": " + ec.message());

  std::vector<fs::path> written;
  for (const auto& result : results) {
    for (const auto& run : result.runs) {
      const fs::path path = out_dir / "events" /
                            (result.config.slug() + "_rep" + std::to_string(run.replicate) + ".jsonl");
      std::string content;
      for (const auto& line : run.events) content += line + "\n";
      write_file(path, content);
      written.push_back(path);
    }
  }

  for (const auto& curve : report.curves) {
    std::string content = "iteration,mean_regret,sd_regret,n\n";
    for (const auto& p : curve.points) {
      content += std::to_string(p.iteration) + "," + format_real(p.mean) + "," +
                 format_real(p.sd) + "," + std::to_string(p.n) + "\n";
    }
    const fs::path path = out_dir / ("curve_" + curve.slug + ".csv");
    write_file(path, content);
    written.push_back(path);
  }

  std::string summary =
      "curve,group,strategy,average_regret,sd_average_regret,factor_vs_baseline,replicates\n";
  for (const auto& curve : report.curves) {
    summary += curve.label + "," + group_key(curve.group) + "," + strategy_key(curve.strategy) +
               "," + format_real(curve.average_regret) + "," +
               format_real(curve.average_regret_sd) + "," +
               (curve.factor ? format_real(*curve.factor) : std::string()) + "," +
               std::to_string(curve.replicates) + "\n";
  }
  write_file(out_dir / "summary.csv", summary);
  written.push_back(out_dir / "summary.csv");

  std::string resolved;
  for (const auto& result : results) {
    resolved += "# curve: " + result.config.label() + "\n" + result.config.to_config().render() + "\n";
  }
  write_file(out_dir / "resolved_config.txt", resolved);
  written.push_back(out_dir / "resolved_config.txt");
  return written;
}

std::vector<CurvePoint> read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "iteration,mean_regret,sd_regret,n") {
    throw SchemaError(path.string() + ": unexpected curve header");
  }
  std::vector<CurvePoint> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_list(line, ',');
    if (fields.size() != 4) throw SchemaError(path.string() + ": malformed curve row");
    Config row;
    row.set("iteration", fields[0]);
    row.set("mean", fields[1]);
    row.set("sd", fields[2]);
    row.set("n", fields[3]);
    points.push_back({row.get_size("iteration", 0), row.get_double("mean", 0.0),
                      row.get_double("sd", 0.0), row.get_size("n", 0)});
  }
  return points;
}

}  // namespace egactive
