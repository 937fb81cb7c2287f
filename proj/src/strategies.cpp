#include "egactive/strategies.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "egactive/error.hpp"

namespace egactive {
namespace {

void require_candidates(std::span<const Id> unlabeled) {
  if (unlabeled.empty()) throw EmptyPoolError("no unlabelled candidates left");
}

/// Order-independent argmax: larger score wins, equal scores go to the lower id.
struct ArgmaxById {
  Id best = std::numeric_limits<Id>::max();
  double best_score = -std::numeric_limits<double>::infinity();
  bool any = false;

  void offer(Id id, double score) {
    if (!any || score > best_score || (score == best_score && id < best)) {
      best = id;
      best_score = score;
      any = true;
    }
  }
};

double cosine(std::span<const double> a, std::span<const double> b, double norm_a,
              double norm_b) {
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  double dot = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
  return dot / (norm_a * norm_b);
}

}  // namespace

void StrategyConfig::validate() const {
  if (committee_size < 2) throw ValidationError("qbc.committee_size must be at least 2");
  if (!(density_exponent >= 0.0)) throw ValidationError("wd.exponent must be non-negative");
}

StrategyKind parse_strategy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "us" || lower == "uncertainty") return StrategyKind::Uncertainty;
  if (lower == "qbc" || lower == "cbq" || lower == "committee") return StrategyKind::Committee;
  if (lower == "wd" || lower == "density") return StrategyKind::DensityWeighted;
  if (lower == "random") return StrategyKind::Random;
  throw ValidationError("unknown strategy '" + std::string(name) + "' (us | qbc | wd | random)");
}

std::string strategy_label(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Uncertainty: return "US";
    case StrategyKind::Committee: return "QBC";
    case StrategyKind::DensityWeighted: return "WD";
    case StrategyKind::Random: return "random";
  }
  return "?";
}

std::string strategy_key(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Uncertainty: return "us";
    case StrategyKind::Committee: return "qbc";
    case StrategyKind::DensityWeighted: return "wd";
    case StrategyKind::Random: return "random";
  }
  return "?";
}

double entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (const double p : probabilities) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double vote_entropy(std::span<const std::size_t> votes) {
  std::size_t total = 0;
  for (const auto v : votes) total += v;
  if (total == 0) return 0.0;
  double h = 0.0;
  for (const auto v : votes) {
    if (v == 0) continue;
    const double f = static_cast<double>(v) / static_cast<double>(total);
    h -= f * std::log(f);
  }
  return h;
}

Id select_uncertainty(const Hypothesis& h, const Dataset& dataset,
                      std::span<const Id> unlabeled) {
  require_candidates(unlabeled);
  const ProbabilityRows probs = class_probabilities(h, dataset, unlabeled);
  ArgmaxById best;
  for (std::size_t i = 0; i < unlabeled.size(); ++i) {
    best.offer(unlabeled[i], entropy(probs.row(i)));
  }
  return best.best;
}

Id select_qbc(const Dataset& dataset, std::span<const Id> labeled,
              std::span<const Id> unlabeled, std::size_t committee_size,
              std::uint64_t seed, const TrainHyper& hyper) {
  require_candidates(unlabeled);
  if (labeled.size() < 2) {
    throw InsufficientLabelsError("query-by-committee needs at least 2 labelled examples, have " +
                                  std::to_string(labeled.size()));
  }
  if (committee_size < 2) throw ValidationError("committee_size must be at least 2");

  std::vector<std::size_t> votes(unlabeled.size() * dataset.num_classes, 0);
  std::vector<Id> sample_ids(labeled.size());
  std::vector<ClassIndex> sample_labels(labeled.size());
  for (std::size_t m = 0; m < committee_size; ++m) {
    Rng rng(derive_seed(seed, m));
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      sample_ids[i] = labeled[rng.index(labeled.size())];
      sample_labels[i] = dataset.labels[sample_ids[i]];
    }
    const Hypothesis member = train_with_labels(dataset, sample_ids, sample_labels, hyper);
    for (std::size_t i = 0; i < unlabeled.size(); ++i) {
      ++votes[i * dataset.num_classes + member.predict_class(dataset.row(unlabeled[i]))];
    }
  }
  ArgmaxById best;
  for (std::size_t i = 0; i < unlabeled.size(); ++i) {
    best.offer(unlabeled[i],
               vote_entropy(std::span<const std::size_t>(
                   votes.data() + i * dataset.num_classes, dataset.num_classes)));
  }
  return best.best;
}

std::vector<double> density_scores(const Dataset& dataset, std::span<const Id> unlabeled) {
  std::vector<double> norms(unlabeled.size());
  for (std::size_t i = 0; i < unlabeled.size(); ++i) {
    double sq = 0.0;
    for (const double v : dataset.row(unlabeled[i])) sq += v * v;
    norms[i] = std::sqrt(sq);
  }
  std::vector<double> density(unlabeled.size(), 0.0);
  for (std::size_t i = 0; i < unlabeled.size(); ++i) {
    double total = 0.0;
    for (std::size_t k = 0; k < unlabeled.size(); ++k) {
      total += cosine(dataset.row(unlabeled[i]), dataset.row(unlabeled[k]), norms[i], norms[k]);
    }
    density[i] = std::max(0.0, total / static_cast<double>(unlabeled.size()));
  }
  return density;
}

Id select_density_weighted(const Hypothesis& h, const Dataset& dataset,
                           std::span<const Id> unlabeled, double density_exponent) {
  require_candidates(unlabeled);
  if (!(density_exponent >= 0.0)) throw ValidationError("density exponent must be non-negative");
  if (unlabeled.size() == 1) return unlabeled.front();
  const ProbabilityRows probs = class_probabilities(h, dataset, unlabeled);
  ArgmaxById best;
  if (density_exponent == 0.0) {
    // pow(x, 0) == 1 for every x, so this is plain uncertainty sampling.
    for (std::size_t i = 0; i < unlabeled.size(); ++i) {
      best.offer(unlabeled[i], entropy(probs.row(i)));
    }
    return best.best;
  }
  const std::vector<double> density = density_scores(dataset, unlabeled);
  for (std::size_t i = 0; i < unlabeled.size(); ++i) {
    best.offer(unlabeled[i], entropy(probs.row(i)) * std::pow(density[i], density_exponent));
  }
  return best.best;
}

Id select_random(std::span<const Id> unlabeled, Rng& rng) {
  require_candidates(unlabeled);
  return unlabeled[rng.index(unlabeled.size())];
}

Id select_query(const StrategyConfig& strategy, const Hypothesis& h, const Dataset& dataset,
                const PoolState& pool, const TrainHyper& hyper, Rng& select_rng) {
  switch (strategy.kind) {
    case StrategyKind::Uncertainty:
      return select_uncertainty(h, dataset, pool.unlabeled);
    case StrategyKind::Committee:
      require_candidates(pool.unlabeled);
      return select_qbc(dataset, pool.labeled, pool.unlabeled, strategy.committee_size,
                        select_rng.next(), hyper);
    case StrategyKind::DensityWeighted:
      return select_density_weighted(h, dataset, pool.unlabeled, strategy.density_exponent);
    case StrategyKind::Random:
      return select_random(pool.unlabeled, select_rng);
  }
  throw ValidationError("unhandled strategy kind");
}

}  // namespace egactive
