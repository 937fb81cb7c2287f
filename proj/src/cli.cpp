#include "egactive/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>

#include "egactive/config.hpp"
#include "egactive/dataset.hpp"
#include "egactive/error.hpp"
#include "egactive/harness.hpp"
#include "egactive/selftest.hpp"

namespace egactive {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string default_out_dir() {
  if (const char* env = std::getenv("EGACTIVE_OUT_DIR"); env && *env) return env;
  return "egactive_out";
}

/// Flags shared by run and compare; empty means "keep the file value".
struct Overrides {
  std::string config_path;
  std::string dataset;
  std::string strategy;
  std::string group;
  std::string epsilon;
  std::string seed;
  std::string budget;
  std::string checkpoint_every;
  std::string replicates;
  std::string threads;
  std::string out;
  std::vector<std::string> assignments;

  void apply(Config& config) const {
    if (!dataset.empty()) config.set("dataset", dataset);
    if (!strategy.empty()) config.set("strategy", strategy);
    if (!group.empty()) config.set("group", group);
    if (!epsilon.empty()) config.set("explore.epsilon", epsilon);
    if (!seed.empty()) config.set("seed", seed);
    if (!budget.empty()) {
      config.set("budget", budget);
      if (config.has("eg.iterations")) config.set("eg.iterations", budget);
    }
    if (!checkpoint_every.empty()) config.set("checkpoint_every", checkpoint_every);
    if (!replicates.empty()) config.set("replicates", replicates);
    if (!threads.empty()) config.set("threads", threads);
    for (const auto& a : assignments) config.set_assignment(a);
  }
};

void add_shared_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--out", o.out, "Output directory (default $EGACTIVE_OUT_DIR or egactive_out)");
  cmd->add_option("--budget", o.budget, "Oracle queries per run");
  cmd->add_option("--checkpoint-every", o.checkpoint_every, "Iterations between checkpoints");
  cmd->add_option("--replicates", o.replicates, "Replicates per curve");
  cmd->add_option("--threads", o.threads, "Replicates run in parallel");
  cmd->add_option("--set", o.assignments, "Extra key=value override (repeatable)");
}

void report_summary(const ComparisonReport& report, std::ostream& out) {
  for (const auto& curve : report.curves) {
    out << curve.label << ": average regret " << format_real(curve.average_regret) << " (sd "
        << format_real(curve.average_regret_sd) << ", n=" << curve.replicates << ")";
    if (curve.factor) out << ", factor vs random " << format_real(*curve.factor);
    out << "\n";
  }
}

SyntheticSpec synth_spec(std::size_t clusters, std::size_t per_cluster, double spread,
                         std::uint64_t seed) {
  if (clusters == 3) {
    SyntheticSpec spec = hidden_cluster_spec(per_cluster, seed);
    if (spread > 0.0) spec.spread = spread;
    return spec;
  }
  if (clusters == 2) return two_gaussian_spec(per_cluster, seed, spread > 0.0 ? spread : 0.5);
  SyntheticSpec spec;
  for (std::size_t k = 0; k < clusters; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(clusters);
    spec.centers.push_back({10.0 * std::cos(angle), 10.0 * std::sin(angle)});
    spec.class_of_cluster.push_back(k % 2);
  }
  spec.per_cluster = per_cluster;
  spec.dim = 2;
  spec.spread = spread > 0.0 ? spread : 1.0;
  spec.seed = seed;
  return spec;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Active learning with exponentiated-gradient tuned exploration", "egactive"};
  app.require_subcommand(1);

  Overrides run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment configuration");
  run_cmd->add_option("--config", run_opts.config_path, "key = value config file");
  run_cmd->add_option("--dataset", run_opts.dataset, "CSV dataset (header, features, label last)");
  run_cmd->add_option("--strategy", run_opts.strategy, "us | qbc | wd | random");
  run_cmd->add_option("--group", run_opts.group, "pure | fixed_eps | adaptive | eg");
  run_cmd->add_option("--epsilon", run_opts.epsilon, "Exploitation probability (fixed_eps)");
  add_shared_flags(run_cmd, run_opts);

  Overrides cmp_opts;
  auto* cmp_cmd = app.add_subcommand("compare", "Run a comparison suite");
  cmp_cmd->add_option("suite", cmp_opts.config_path, "Suite file (shared keys plus curves = ...)")
      ->required();
  cmp_cmd->add_option("--dataset", cmp_opts.dataset, "CSV dataset overriding the suite's");
  add_shared_flags(cmp_cmd, cmp_opts);

  std::size_t clusters = 3;
  std::size_t per_cluster = 250;
  double spread = 0.0;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset CSV");
  synth_cmd->add_option("--clusters", clusters, "2: two Gaussians, 3: hidden cluster, k: ring");
  synth_cmd->add_option("--per-cluster", per_cluster, "Examples per cluster");
  synth_cmd->add_option("--spread", spread, "Cluster standard deviation");
  synth_cmd->add_option("--seed", synth_seed, "Generator seed");
  synth_cmd->add_option("--out", synth_out, "Output CSV path")->required();

  auto* self_cmd = app.add_subcommand("selftest", "Run built-in oracle and invariant checks");

  std::vector<const char*> argv{"egactive"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*synth_cmd) {
      const Dataset data = make_synthetic(synth_spec(clusters, per_cluster, spread, synth_seed));
      save_dataset(data, synth_out);
      out << "wrote " << data.size() << " examples (" << data.num_classes << " classes) to "
          << synth_out << "\n";
      return 0;
    }
    if (*self_cmd) {
      const SelftestReport report = run_selftest();
      for (const auto& failure : report.failures) err << "FAIL " << failure << "\n";
      out << "selftest: " << report.checks << " checks, " << report.failures.size()
          << " failed\n";
      return report.ok() ? 0 : 1;
    }

    const bool is_run = static_cast<bool>(*run_cmd);
    Overrides& opts = is_run ? run_opts : cmp_opts;
    Config config = opts.config_path.empty() ? Config{} : Config::load(opts.config_path);
    opts.apply(config);
    const std::string out_dir =
        !opts.out.empty() ? opts.out : config.get_string("out", default_out_dir());
    config.erase("out");

    std::vector<ExperimentConfig> suite;
    if (is_run) {
      if (config.has("curves")) throw UsageError("'curves' belongs in a compare suite");
      suite.push_back(ExperimentConfig::from_config(config));
    } else {
      suite = suite_from_config(config);
    }
    if (suite.front().source.empty()) {
      throw UsageError("no dataset: pass --dataset or set dataset / synthetic.* in the config");
    }
    const ComparisonResult result = run_comparison(suite);
    emit_results(result.report, result.results, out_dir);
    report_summary(result.report, out);
    out << "results written to " << out_dir << "\n";
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "egactive: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace egactive
