#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "egactive/dataset.hpp"

namespace egactive {

struct TrainHyper {
  std::size_t epochs = 200;
  double step = 0.1;
  double l2 = 1e-3;
  std::uint64_t seed = 0;
};

/// Multinomial linear scorer: score_c(x) = w_c . x + b_c.
/// Immutable once trained; safe to share read-only.
struct Hypothesis {
  std::size_t num_classes = 0;
  std::size_t dim = 0;
  std::vector<double> weights;  // num_classes x dim, row-major
  std::vector<double> biases;   // num_classes
  TrainHyper meta;

  static Hypothesis zeros(std::size_t num_classes, std::size_t dim);

  std::span<const double> weight_row(std::size_t c) const {
    return {weights.data() + c * dim, dim};
  }
  std::span<double> weight_row(std::size_t c) { return {weights.data() + c * dim, dim}; }

  /// Raw class scores for one feature vector.
  void scores(std::span<const double> x, std::span<double> out) const;
  /// Argmax of the scores, ties to the lowest class index.
  ClassIndex predict_class(std::span<const double> x) const;
};

enum class PredictionLayout { BinaryScore, FlattenedProbabilities };

/// Real-valued predictions of one hypothesis over an ordered id list.
struct PredictionVector {
  std::vector<double> values;
  PredictionLayout layout = PredictionLayout::BinaryScore;
  std::vector<Id> over_ids;
};

/// Per-example class probabilities, one row of `num_classes` per id.
struct ProbabilityRows {
  std::size_t num_classes = 0;
  std::vector<double> values;

  std::size_t rows() const { return num_classes == 0 ? 0 : values.size() / num_classes; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * num_classes, num_classes};
  }
};

/// Full-batch gradient descent on the mean softmax log-loss plus
/// (l2 / 2) * ||W||^2 (biases unpenalised), from zero weights, for exactly
/// `hyper.epochs` steps.
Hypothesis train(const Dataset& dataset, std::span<const Id> labeled_ids,
                 const TrainHyper& hyper);

/// Same as `train`, but with labels supplied per id (used for bootstrap
/// committees and tests that relabel data).
Hypothesis train_with_labels(const Dataset& dataset, std::span<const Id> ids,
                             std::span<const ClassIndex> labels, const TrainHyper& hyper);

struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad_weights;
  std::vector<double> grad_biases;
};

/// Training objective and its analytic gradient at `h`.
LossGradient training_loss(const Hypothesis& h, const Dataset& dataset,
                           std::span<const Id> ids, std::span<const ClassIndex> labels,
                           double l2);

/// Binary (C = 2): score(class 1) - score(class 0) per id.
/// Multiclass: softmax probabilities flattened row-major.
PredictionVector predict_scores(const Hypothesis& h, const Dataset& dataset,
                                std::span<const Id> over_ids);

ProbabilityRows class_probabilities(const Hypothesis& h, const Dataset& dataset,
                                    std::span<const Id> over_ids);

/// Fraction of argmax mismatches on `test_ids`.
double evaluate(const Hypothesis& h, const Dataset& dataset, std::span<const Id> test_ids);

/// Numerically stable in-place softmax.
void softmax_inplace(std::span<double> scores);

}  // namespace egactive
