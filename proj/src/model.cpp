#include "egactive/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "egactive/error.hpp"

namespace egactive {
namespace {

void check_ids(const Dataset& dataset, std::span<const Id> ids) {
  for (const Id id : ids) {
    if (!dataset.contains(id)) {
      throw UnknownIdError("id " + std::to_string(id) + " is not in the dataset");
    }
  }
}

void check_shape(const Hypothesis& h, const Dataset& dataset) {
  if (h.dim != dataset.dim || h.num_classes != dataset.num_classes) {
    throw ValidationError("hypothesis shape does not match the dataset");
  }
}

}  // namespace

Hypothesis Hypothesis::zeros(std::size_t num_classes, std::size_t dim) {
  Hypothesis h;
  h.num_classes = num_classes;
  h.dim = dim;
  h.weights.assign(num_classes * dim, 0.0);
  h.biases.assign(num_classes, 0.0);
  return h;
}

void Hypothesis::scores(std::span<const double> x, std::span<double> out) const {
  for (std::size_t c = 0; c < num_classes; ++c) {
    const double* w = weights.data() + c * dim;
    double s = biases[c];
    for (std::size_t j = 0; j < dim; ++j) s += w[j] * x[j];
    out[c] = s;
  }
}

ClassIndex Hypothesis::predict_class(std::span<const double> x) const {
  ClassIndex best = 0;
  double best_score = 0.0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    double s = biases[c];
    const double* w = weights.data() + c * dim;
    for (std::size_t j = 0; j < dim; ++j) s += w[j] * x[j];
    if (c == 0 || s > best_score) {
      best = c;
      best_score = s;
    }
  }
  return best;
}

void softmax_inplace(std::span<double> scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double& s : scores) {
    s = std::exp(s - top);
    total += s;
  }
  for (double& s : scores) s /= total;
}

LossGradient training_loss(const Hypothesis& h, const Dataset& dataset,
                           std::span<const Id> ids, std::span<const ClassIndex> labels,
                           double l2) {
  const std::size_t num_classes = h.num_classes;
  const std::size_t dim = h.dim;
  LossGradient out;
  out.grad_weights.assign(num_classes * dim, 0.0);
  out.grad_biases.assign(num_classes, 0.0);
  std::vector<double> p(num_classes);
  const double inv_n = 1.0 / static_cast<double>(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto x = dataset.row(ids[i]);
    h.scores(x, p);
    softmax_inplace(p);
    const ClassIndex y = labels[i];
    out.loss -= std::log(std::max(p[y], 1e-300)) * inv_n;
    for (std::size_t c = 0; c < num_classes; ++c) {
      const double g = (p[c] - (c == y ? 1.0 : 0.0)) * inv_n;
      out.grad_biases[c] += g;
      double* gw = out.grad_weights.data() + c * dim;
      for (std::size_t j = 0; j < dim; ++j) gw[j] += g * x[j];
    }
  }
  for (std::size_t k = 0; k < h.weights.size(); ++k) {
    out.loss += 0.5 * l2 * h.weights[k] * h.weights[k];
    out.grad_weights[k] += l2 * h.weights[k];
  }
  return out;
}

Hypothesis train_with_labels(const Dataset& dataset, std::span<const Id> ids,
                             std::span<const ClassIndex> labels, const TrainHyper& hyper) {
  if (ids.empty()) throw ValidationError("cannot train on an empty labelled set");
  if (labels.size() != ids.size()) throw ValidationError("ids and labels differ in length");
  check_ids(dataset, ids);
  Hypothesis h = Hypothesis::zeros(dataset.num_classes, dataset.dim);
  h.meta = hyper;

  const std::size_t num_classes = h.num_classes;
  const std::size_t dim = h.dim;
  const double inv_n = 1.0 / static_cast<double>(ids.size());
  std::vector<double> grad_w(num_classes * dim);
  std::vector<double> grad_b(num_classes);
  std::vector<double> p(num_classes);
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto x = dataset.row(ids[i]);
      h.scores(x, p);
      softmax_inplace(p);
      const ClassIndex y = labels[i];
      for (std::size_t c = 0; c < num_classes; ++c) {
        const double g = (p[c] - (c == y ? 1.0 : 0.0)) * inv_n;
        grad_b[c] += g;
        double* gw = grad_w.data() + c * dim;
        for (std::size_t j = 0; j < dim; ++j) gw[j] += g * x[j];
      }
    }
    for (std::size_t k = 0; k < h.weights.size(); ++k) {
      h.weights[k] -= hyper.step * (grad_w[k] + hyper.l2 * h.weights[k]);
    }
    for (std::size_t c = 0; c < num_classes; ++c) h.biases[c] -= hyper.step * grad_b[c];
  }
  for (const double v : h.weights) {
    if (!std::isfinite(v)) throw NumericOverflowError("training produced non-finite weights");
  }
  return h;
}

Hypothesis train(const Dataset& dataset, std::span<const Id> labeled_ids,
                 const TrainHyper& hyper) {
  if (labeled_ids.empty()) throw ValidationError("cannot train on an empty labelled set");
  check_ids(dataset, labeled_ids);
  std::vector<ClassIndex> labels;
  labels.reserve(labeled_ids.size());
  for (const Id id : labeled_ids) labels.push_back(dataset.labels[id]);
  return train_with_labels(dataset, labeled_ids, labels, hyper);
}

ProbabilityRows class_probabilities(const Hypothesis& h, const Dataset& dataset,
                                    std::span<const Id> over_ids) {
  check_shape(h, dataset);
  check_ids(dataset, over_ids);
  ProbabilityRows out;
  out.num_classes = h.num_classes;
  out.values.resize(over_ids.size() * h.num_classes);
  for (std::size_t i = 0; i < over_ids.size(); ++i) {
    std::span<double> row(out.values.data() + i * h.num_classes, h.num_classes);
    h.scores(dataset.row(over_ids[i]), row);
    softmax_inplace(row);
  }
  return out;
}

PredictionVector predict_scores(const Hypothesis& h, const Dataset& dataset,
                                std::span<const Id> over_ids) {
  check_shape(h, dataset);
  check_ids(dataset, over_ids);
  PredictionVector out;
  out.over_ids.assign(over_ids.begin(), over_ids.end());
  if (h.num_classes == 2) {
    out.layout = PredictionLayout::BinaryScore;
    out.values.reserve(over_ids.size());
    std::vector<double> s(2);
    for (const Id id : over_ids) {
      h.scores(dataset.row(id), s);
      out.values.push_back(s[1] - s[0]);
    }
  } else {
    out.layout = PredictionLayout::FlattenedProbabilities;
    out.values = class_probabilities(h, dataset, over_ids).values;
  }
  return out;
}

double evaluate(const Hypothesis& h, const Dataset& dataset, std::span<const Id> test_ids) {
  if (test_ids.empty()) throw ValidationError("cannot evaluate on an empty test set");
  check_shape(h, dataset);
  check_ids(dataset, test_ids);
  std::size_t wrong = 0;
  for (const Id id : test_ids) {
    if (h.predict_class(dataset.row(id)) != dataset.labels[id]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(test_ids.size());
}

}  // namespace egactive
