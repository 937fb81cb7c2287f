#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace egactive {

using Id = std::size_t;
using ClassIndex = std::size_t;

/// Labelled example set. Ids are the dense row indices 0..size()-1 and
/// features are stored row-major.
struct Dataset {
  std::size_t dim = 0;
  std::size_t num_classes = 0;
  std::vector<double> features;
  std::vector<ClassIndex> labels;
  /// Original label text per class index, in first-appearance order.
  std::vector<std::string> class_names;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(Id id) const {
    return {features.data() + id * dim, dim};
  }
  bool contains(Id id) const { return id < labels.size(); }

  /// Throws ValidationError when an invariant is broken.
  void validate() const;
};

/// Reads a CSV file: header row, real-valued feature columns, label last.
/// Labels are remapped to 0..C-1 by first appearance.
Dataset load_dataset(const std::filesystem::path& path);
Dataset parse_dataset_csv(std::istream& in, const std::string& source);

/// Writes the CSV form read by load_dataset (17 significant digits).
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
void write_dataset_csv(const Dataset& dataset, std::ostream& out);

/// Isotropic Gaussian clusters, emitted cluster-major: cluster 0's examples
/// first, then cluster 1's, and so on.
struct SyntheticSpec {
  std::vector<std::vector<double>> centers;
  std::vector<ClassIndex> class_of_cluster;
  std::size_t per_cluster = 0;
  /// Optional per-cluster counts; overrides per_cluster when non-empty.
  std::vector<std::size_t> cluster_sizes;
  std::size_t dim = 0;
  double spread = 1.0;
  std::uint64_t seed = 0;

  std::size_t num_clusters() const { return centers.size(); }
  std::size_t size_of(std::size_t cluster) const {
    return cluster_sizes.empty() ? per_cluster : cluster_sizes[cluster];
  }
  /// First id of `cluster` in the generated dataset.
  std::size_t first_id(std::size_t cluster) const;
};

Dataset make_synthetic(const SyntheticSpec& spec);

/// Two well separated blobs at (-10, 0) and (10, 0), one per class.
SyntheticSpec two_gaussian_spec(std::size_t per_cluster, std::uint64_t seed,
                                double spread = 0.5);

/// Three clusters: class 0 at the origin, class 1 next to it, and a smaller
/// second class-1 cluster placed where a model fit to the first two
/// confidently predicts class 0. Boundary-refining strategies rarely query it.
SyntheticSpec hidden_cluster_spec(std::size_t per_cluster, std::uint64_t seed);

}  // namespace egactive
