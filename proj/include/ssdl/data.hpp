#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ssdl {

/// Dense sample matrix with optional per-sample class labels.
///
/// Features are stored d x n: one column per sample, one row per dimension.
/// Class indices are contiguous in [0, num_classes()).
class Dataset {
 public:
  Dataset(Eigen::MatrixXd features, std::vector<std::optional<int>> labels,
          std::vector<std::string> class_names,
          std::vector<std::string> feature_names = {});

  const Eigen::MatrixXd& features() const { return features_; }
  Eigen::Index dims() const { return features_.rows(); }
  Eigen::Index size() const { return features_.cols(); }
  int num_classes() const { return static_cast<int>(class_names_.size()); }

  const std::vector<std::optional<int>>& labels() const { return labels_; }
  const std::vector<std::string>& class_names() const { return class_names_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }

  /// Same labels and names, new feature values (same shape).
  Dataset with_features(Eigen::MatrixXd features) const;

  /// Columns of the feature matrix selected by `indices`, in order.
  Eigen::MatrixXd columns(const std::vector<std::size_t>& indices) const;

 private:
  Eigen::MatrixXd features_;
  std::vector<std::optional<int>> labels_;
  std::vector<std::string> class_names_;
  std::vector<std::string> feature_names_;
};

struct CsvSchema {
  /// Zero-based label column; negative counts from the end (-1 = last).
  int label_column = -1;
  bool has_header = false;
};

/// Parses a comma-separated file. Class indices are assigned in order of
/// first appearance. Throws DataError naming the offending row.
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

/// Partition of sample indices for one experimental run.
///
/// All three lists are sorted ascending and pairwise disjoint. Labels of
/// the unlabeled partition stay in the Dataset; only `score_unlabeled`
/// style accessors outside the learning path may read them.
struct Split {
  std::vector<std::size_t> labeled_train;
  std::vector<std::size_t> unlabeled_train;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;

  /// labeled_train followed by unlabeled_train; the column order every
  /// training-set matrix in the pipeline uses.
  std::vector<std::size_t> training() const;

  friend bool operator==(const Split&, const Split&) = default;
};

/// Stratified random split. ceil(test_fraction * n) samples go to test
/// (largest-remainder allocation across classes); of each class's remaining
/// samples, ceil(labeled_ratio * count) become labeled.
Split split(const Dataset& ds, double test_fraction, double labeled_ratio,
            std::uint64_t seed);

/// Per-dimension z-score using statistics of the training samples
/// (labeled + unlabeled) only; every column is transformed with them.
/// Zero-variance dimensions are centered and left unscaled.
Dataset standardize(const Dataset& ds, const Split& split);

/// One-hot label matrix, c x n_l: entry (k, j) is 1 iff labeled sample j
/// belongs to class k.
struct LabelMatrix {
  Eigen::MatrixXd onehot;
};

LabelMatrix one_hot(const Split& split, const Dataset& ds);

/// Class indices of `indices` (all must be labeled).
std::vector<int> labels_of(const Dataset& ds, const std::vector<std::size_t>& indices);

/// What the dictionary learner is allowed to see of one split: labeled
/// features with their labels and unlabeled features without.
struct LearningSet {
  Eigen::MatrixXd labeled;    // d x n_l
  std::vector<int> labels;    // n_l
  Eigen::MatrixXd unlabeled;  // d x n_u
  int num_classes = 0;

  /// [labeled unlabeled], d x (n_l + n_u).
  Eigen::MatrixXd training() const;
  LabelMatrix label_matrix() const;
};

LearningSet learning_set(const Dataset& ds, const Split& split);

/// Ground-truth labels of the unlabeled partition. For scoring and
/// diagnostics only; the learning pipeline never calls this.
std::vector<int> unlabeled_truth_for_scoring(const Dataset& ds, const Split& split);

}  // namespace ssdl
