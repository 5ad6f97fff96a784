#include "ssdl/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string_view>

#include "ssdl/error.hpp"
#include "ssdl/random.hpp"

namespace ssdl {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value, std::chars_format::general);
  if (ec != std::errc{} || ptr != end || cell.empty()) return std::nullopt;
  return value;
}

[[noreturn]] void fail_row(std::size_t row, const std::string& what) {
  throw DataError("row " + std::to_string(row) + ": " + what);
}

}  // namespace

Dataset::Dataset(Eigen::MatrixXd features, std::vector<std::optional<int>> labels,
                 std::vector<std::string> class_names, std::vector<std::string> feature_names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      class_names_(std::move(class_names)),
      feature_names_(std::move(feature_names)) {
  if (features_.cols() < 2) throw DataError("dataset needs at least 2 samples");
  if (features_.rows() < 1) throw DataError("dataset needs at least 1 feature");
  if (static_cast<Eigen::Index>(labels_.size()) != features_.cols()) {
    throw DataError("label count does not match sample count");
  }
  if (!feature_names_.empty() &&
      static_cast<Eigen::Index>(feature_names_.size()) != features_.rows()) {
    throw DataError("feature name count does not match dimension");
  }
  if (!features_.allFinite()) throw DataError("non-finite feature value");
  const bool any_label =
      std::any_of(labels_.begin(), labels_.end(), [](const auto& l) { return l.has_value(); });
  if (any_label && num_classes() < 2) throw DataError("labeled dataset needs at least 2 classes");
  for (const auto& label : labels_) {
    if (label && (*label < 0 || *label >= num_classes())) {
      throw DataError("label index out of range");
    }
  }
}

Dataset Dataset::with_features(Eigen::MatrixXd features) const {
  if (features.rows() != features_.rows() || features.cols() != features_.cols()) {
    throw std::invalid_argument("with_features: shape mismatch");
  }
  return Dataset(std::move(features), labels_, class_names_, feature_names_);
}

Eigen::MatrixXd Dataset::columns(const std::vector<std::size_t>& indices) const {
  Eigen::MatrixXd out(features_.rows(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = features_.col(static_cast<Eigen::Index>(indices[j]));
  }
  return out;
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::vector<std::string> feature_names;
  std::size_t arity = 0;
  std::size_t label_col = 0;
  std::size_t row_no = 0;
  bool header_pending = schema.has_header;

  std::string line;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line);

    if (arity == 0) {
      arity = cells.size();
      if (arity < 2) fail_row(row_no, "need at least one feature column and a label column");
      const int n = static_cast<int>(arity);
      const int col = schema.label_column < 0 ? n + schema.label_column : schema.label_column;
      if (col < 0 || col >= n) fail_row(row_no, "label column out of range");
      label_col = static_cast<std::size_t>(col);
    } else if (cells.size() != arity) {
      fail_row(row_no, "expected " + std::to_string(arity) + " cells, found " +
                           std::to_string(cells.size()));
    }

    if (header_pending) {
      header_pending = false;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c != label_col) feature_names.emplace_back(cells[c]);
      }
      continue;
    }

    std::vector<double> values;
    values.reserve(arity - 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_col) continue;
      const auto value = parse_number(cells[c]);
      if (!value) {
        fail_row(row_no, "column " + std::to_string(c + 1) + " is not a number: '" +
                             std::string(cells[c]) + "'");
      }
      if (!std::isfinite(*value)) {
        fail_row(row_no, "column " + std::to_string(c + 1) + " is not finite");
      }
      values.push_back(*value);
    }
    rows.push_back(std::move(values));
    raw_labels.emplace_back(cells[label_col]);
  }

  if (rows.empty()) throw DataError(path.string() + ": no data rows");

  std::map<std::string, int> class_index;
  std::vector<std::string> class_names;
  std::vector<std::optional<int>> labels;
  labels.reserve(raw_labels.size());
  for (const auto& raw : raw_labels) {
    if (raw.empty()) {
      labels.emplace_back();
      continue;
    }
    const auto [it, inserted] = class_index.try_emplace(raw, static_cast<int>(class_names.size()));
    if (inserted) class_names.push_back(raw);
    labels.emplace_back(it->second);
  }

  const auto d = static_cast<Eigen::Index>(arity - 1);
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd features(d, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      features(i, j) = rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
  }
  return Dataset(std::move(features), std::move(labels), std::move(class_names),
                 std::move(feature_names));
}

std::vector<std::size_t> Split::training() const {
  std::vector<std::size_t> out = labeled_train;
  out.insert(out.end(), unlabeled_train.begin(), unlabeled_train.end());
  return out;
}

Split split(const Dataset& ds, double test_fraction, double labeled_ratio, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test_fraction must lie in (0, 1)");
  }
  if (!(labeled_ratio > 0.0 && labeled_ratio <= 1.0)) {
    throw std::invalid_argument("labeled_ratio must lie in (0, 1]");
  }
  const int c = ds.num_classes();
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(c));
  for (std::size_t i = 0; i < ds.labels().size(); ++i) {
    const auto& label = ds.labels()[i];
    if (!label) throw DataError("split requires every sample to be labeled");
    by_class[static_cast<std::size_t>(*label)].push_back(i);
  }
  const auto n = static_cast<double>(ds.size());

  // Largest-remainder allocation of ceil(test_fraction * n) test samples.
  const auto test_total = static_cast<std::size_t>(std::ceil(test_fraction * n - 1e-9));
  std::vector<std::size_t> test_count(by_class.size());
  std::vector<double> remainder(by_class.size());
  std::size_t allocated = 0;
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    const double exact = test_fraction * static_cast<double>(by_class[k].size());
    test_count[k] = static_cast<std::size_t>(std::floor(exact));
    remainder[k] = exact - static_cast<double>(test_count[k]);
    allocated += test_count[k];
  }
  std::vector<std::size_t> order(by_class.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t r = 0; allocated < test_total && r < order.size(); ++r) {
    ++test_count[order[r]];
    ++allocated;
  }

  Rng rng(seed);
  Split out;
  out.seed = seed;
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    auto& members = by_class[k];
    rng.shuffle(std::span<std::size_t>(members));
    const std::size_t n_test = test_count[k];
    const std::size_t n_train = members.size() - n_test;
    const auto n_labeled = static_cast<std::size_t>(
        std::ceil(labeled_ratio * static_cast<double>(n_train) - 1e-9));
    if (n_labeled == 0) {
      throw DataError("class '" + ds.class_names()[k] + "' has no labeled training samples");
    }
    out.test.insert(out.test.end(), members.begin(), members.begin() + n_test);
    out.labeled_train.insert(out.labeled_train.end(), members.begin() + n_test,
                             members.begin() + n_test + n_labeled);
    out.unlabeled_train.insert(out.unlabeled_train.end(), members.begin() + n_test + n_labeled,
                               members.end());
  }
  std::sort(out.test.begin(), out.test.end());
  std::sort(out.labeled_train.begin(), out.labeled_train.end());
  std::sort(out.unlabeled_train.begin(), out.unlabeled_train.end());
  return out;
}

Dataset standardize(const Dataset& ds, const Split& split) {
  const auto train = split.training();
  if (train.empty()) throw std::invalid_argument("standardize: empty training set");
  const Eigen::MatrixXd x = ds.columns(train);
  const Eigen::VectorXd mean = x.rowwise().mean();
  const Eigen::VectorXd var =
      (x.colwise() - mean).array().square().rowwise().sum() / static_cast<double>(x.cols());

  Eigen::MatrixXd out = ds.features().colwise() - mean;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double sd = std::sqrt(var(i));
    if (sd > 1e-12 * std::max(1.0, std::abs(mean(i)))) out.row(i) /= sd;
  }
  return ds.with_features(std::move(out));
}

std::vector<int> labels_of(const Dataset& ds, const std::vector<std::size_t>& indices) {
  std::vector<int> out;
  out.reserve(indices.size());
  for (const auto i : indices) {
    const auto& label = ds.labels().at(i);
    if (!label) throw DataError("sample " + std::to_string(i) + " has no label");
    out.push_back(*label);
  }
  return out;
}

namespace {

LabelMatrix make_onehot(const std::vector<int>& labels, int num_classes) {
  LabelMatrix y{Eigen::MatrixXd::Zero(num_classes, static_cast<Eigen::Index>(labels.size()))};
  for (std::size_t j = 0; j < labels.size(); ++j) y.onehot(labels[j], static_cast<Eigen::Index>(j)) = 1.0;
  return y;
}

}  // namespace

LabelMatrix one_hot(const Split& split, const Dataset& ds) {
  return make_onehot(labels_of(ds, split.labeled_train), ds.num_classes());
}

Eigen::MatrixXd LearningSet::training() const {
  Eigen::MatrixXd x(labeled.rows(), labeled.cols() + unlabeled.cols());
  x << labeled, unlabeled;
  return x;
}

LabelMatrix LearningSet::label_matrix() const { return make_onehot(labels, num_classes); }

LearningSet learning_set(const Dataset& ds, const Split& split) {
  LearningSet set;
  set.labeled = ds.columns(split.labeled_train);
  set.labels = labels_of(ds, split.labeled_train);
  set.unlabeled = ds.columns(split.unlabeled_train);
  set.num_classes = ds.num_classes();
  return set;
}

std::vector<int> unlabeled_truth_for_scoring(const Dataset& ds, const Split& split) {
  return labels_of(ds, split.unlabeled_train);
}

}  // namespace ssdl
