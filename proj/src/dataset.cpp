#include "egactive/dataset.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <algorithm>
#include <map>
#include <sstream>

#include "egactive/error.hpp"
#include "egactive/rng.hpp"

namespace egactive {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::string line_ref(const std::string& source, std::size_t line_no) {
  return source + ":" + std::to_string(line_no);
}

}  // namespace

void Dataset::validate() const {
  if (dim == 0) throw ValidationError("dataset dimension must be positive");
  if (num_classes < 2) {
    throw ValidationError("dataset needs at least 2 classes, found " +
                          std::to_string(num_classes));
  }
  if (features.size() != labels.size() * dim) {
    throw ValidationError("feature storage does not match size * dim");
  }
  std::vector<std::size_t> counts(num_classes, 0);
  for (const ClassIndex y : labels) {
    if (y >= num_classes) {
      throw ValidationError("label " + std::to_string(y) + " out of range");
    }
    ++counts[y];
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (counts[c] == 0) {
      throw ValidationError("class " + std::to_string(c) + " has no examples");
    }
  }
  if (!class_names.empty() && class_names.size() != num_classes) {
    throw ValidationError("class_names size does not match num_classes");
  }
}

Dataset parse_dataset_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw SchemaError(source + ": missing header row");
  }
  ++line_no;
  const std::size_t columns = split_fields(line).size();
  if (columns < 2) {
    throw SchemaError(line_ref(source, line_no) +
                      ": header needs at least one feature and a label column");
  }

  Dataset ds;
  ds.dim = columns - 1;
  std::map<std::string, ClassIndex, std::less<>> class_of_name;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != columns) {
      throw SchemaError(line_ref(source, line_no) + ": expected " +
                        std::to_string(columns) + " columns, found " +
                        std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < ds.dim; ++j) {
      const auto field = fields[j];
      double value = 0.0;
      const auto [ptr, ec] =
          std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc() ||
          ptr != field.data() + field.size()) {
        throw ParseError(line_ref(source, line_no) + ": column " +
                         std::to_string(j + 1) + " is not a real number: '" +
                         std::string(field) + "'");
      }
      ds.features.push_back(value);
    }
    const std::string label(fields.back());
    if (label.empty()) {
      throw ParseError(line_ref(source, line_no) + ": empty label");
    }
    auto it = class_of_name.find(label);
    if (it == class_of_name.end()) {
      it = class_of_name.emplace(label, ds.class_names.size()).first;
      ds.class_names.push_back(label);
    }
    ds.labels.push_back(it->second);
  }
  ds.num_classes = ds.class_names.size();
  if (ds.labels.empty()) throw ValidationError(source + ": no data rows");
  if (ds.num_classes < 2) {
    throw ValidationError(source + ": single-class file (need at least 2)");
  }
  ds.validate();
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_dataset_csv(in, path.string());
}

void write_dataset_csv(const Dataset& dataset, std::ostream& out) {
  for (std::size_t j = 0; j < dataset.dim; ++j) out << 'x' << j << ',';
  out << "label\n";
  char buf[32];
  for (Id id = 0; id < dataset.size(); ++id) {
    for (const double v : dataset.row(id)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << ',';
    }
    const ClassIndex y = dataset.labels[id];
    if (dataset.class_names.empty()) {
      out << y << '\n';
    } else {
      out << dataset.class_names[y] << '\n';
    }
  }
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_dataset_csv(dataset, out);
  if (!out) throw IoError("write failed for " + path.string());
}

Dataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.num_clusters() == 0) throw ValidationError("synthetic spec has zero clusters");
  if (!spec.cluster_sizes.empty() &&
      spec.cluster_sizes.size() != spec.num_clusters()) {
    throw ValidationError("cluster_sizes needs one entry per cluster");
  }
  for (std::size_t k = 0; k < spec.num_clusters(); ++k) {
    if (spec.size_of(k) == 0) {
      throw ValidationError("every cluster needs at least 1 example");
    }
  }
  if (spec.dim == 0) throw ValidationError("dim must be positive");
  if (!(spec.spread > 0.0)) throw ValidationError("spread must be positive");
  if (spec.class_of_cluster.size() != spec.num_clusters()) {
    throw ValidationError("class_of_cluster needs one entry per cluster");
  }
  for (const auto& c : spec.centers) {
    if (c.size() != spec.dim) {
      throw ValidationError("cluster center length differs from dim");
    }
  }

  Dataset ds;
  ds.dim = spec.dim;
  for (const ClassIndex c : spec.class_of_cluster) {
    ds.num_classes = std::max(ds.num_classes, c + 1);
  }
  for (ClassIndex c = 0; c < ds.num_classes; ++c) {
    ds.class_names.push_back(std::to_string(c));
  }
  Rng rng(spec.seed);
  for (std::size_t k = 0; k < spec.num_clusters(); ++k) {
    for (std::size_t i = 0; i < spec.size_of(k); ++i) {
      for (std::size_t j = 0; j < spec.dim; ++j) {
        ds.features.push_back(spec.centers[k][j] + spec.spread * rng.normal());
      }
      ds.labels.push_back(spec.class_of_cluster[k]);
    }
  }
  ds.validate();
  return ds;
}

std::size_t SyntheticSpec::first_id(std::size_t cluster) const {
  std::size_t first = 0;
  for (std::size_t k = 0; k < cluster; ++k) first += size_of(k);
  return first;
}

SyntheticSpec two_gaussian_spec(std::size_t per_cluster, std::uint64_t seed,
                                double spread) {
  SyntheticSpec spec;
  spec.centers = {{-10.0, 0.0}, {10.0, 0.0}};
  spec.class_of_cluster = {0, 1};
  spec.per_cluster = per_cluster;
  spec.dim = 2;
  spec.spread = spread;
  spec.seed = seed;
  return spec;
}

SyntheticSpec hidden_cluster_spec(std::size_t per_cluster, std::uint64_t seed) {
  SyntheticSpec spec;
  // x + y = 2.5 separates class 0 from both class-1 clusters, but a model
  // fit to the first two clusters puts its boundary near x = 2.5 and scores
  // the third cluster as confidently class 0.
  spec.centers = {{0.0, 0.0}, {5.0, 0.0}, {-6.0, 12.0}};
  spec.class_of_cluster = {0, 1, 1};
  spec.per_cluster = per_cluster;
  spec.cluster_sizes = {per_cluster, per_cluster, std::max<std::size_t>(1, per_cluster / 4)};
  spec.dim = 2;
  spec.spread = 0.5;
  spec.seed = seed;
  return spec;
}

}  // namespace egactive
