#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ssdl {

/// Binary RBF-kernel SVM in dual form.
///
/// classes[0] is the lower class index and takes the positive side of the
/// decision function; a decision value of exactly 0 maps to classes[0].
struct SvmModel {
  Eigen::MatrixXd support_vectors;  // dims x s
  Eigen::VectorXd dual;             // alpha_i in (0, C]
  Eigen::VectorXd signs;            // y_i in {+1, -1}
  std::vector<std::size_t> support_indices;  // columns of the training matrix
  double bias = 0.0;
  double gamma = 1.0;
  double c = 1.0;
  std::array<int, 2> classes{0, 1};
  double kkt_gap = 0.0;  // max violating pair gap at exit
  long iterations = 0;
  bool converged = true;

  Eigen::Index dims() const { return support_vectors.rows(); }
};

inline constexpr double kSvmTolerance = 1e-3;

/// SMO with maximal-violating-pair working set selection, run until the
/// pair gap drops below `tolerance`. Requires exactly two distinct labels.
SvmModel train_svm(const Eigen::MatrixXd& codes, std::span<const int> labels, double gamma,
                   double c, double tolerance = kSvmTolerance);

Eigen::VectorXd decision_values(const SvmModel& model, const Eigen::MatrixXd& codes);
std::vector<int> predict(const SvmModel& model, const Eigen::MatrixXd& codes);

/// Percentage of matching entries.
double accuracy_percent(std::span<const int> truth, std::span<const int> predicted);

struct CvGrid {
  std::vector<double> gammas;
  std::vector<double> costs;
  int folds = 5;

  /// gamma in {2^-7, 2^-5, ..., 2^3}, C in {2^-3, 2^-1, ..., 2^7}, 5 folds.
  static CvGrid defaults();
};

struct TuneResult {
  double gamma = 0.0;
  double c = 0.0;
  double cv_accuracy = 0.0;  // mean of per-fold validation accuracy, percent
};

/// Seeded stratified fold assignment: members of each class are shuffled
/// and dealt round-robin, continuing the fold counter across classes.
/// Throws DataError when some fold's training part would miss a class.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, int folds,
                                                       std::uint64_t seed);

/// Grid search by k-fold cross validation. Ties go to the smaller C, then
/// the smaller gamma.
TuneResult tune(const Eigen::MatrixXd& codes, std::span<const int> labels, const CvGrid& grid,
                std::uint64_t seed);

/// Trainable classifier over sparse codes; the experiment harness only
/// talks to this interface.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual void fit(const Eigen::MatrixXd& codes, std::span<const int> labels,
                   std::uint64_t seed) = 0;
  virtual std::vector<int> predict(const Eigen::MatrixXd& codes) const = 0;
};

/// Cross-validated RBF SVM: tune on the training codes, then refit on all
/// of them with the selected (gamma, C).
class TunedRbfSvm final : public Classifier {
 public:
  explicit TunedRbfSvm(CvGrid grid = CvGrid::defaults()) : grid_(std::move(grid)) {}

  void fit(const Eigen::MatrixXd& codes, std::span<const int> labels, std::uint64_t seed) override;
  std::vector<int> predict(const Eigen::MatrixXd& codes) const override;

  const TuneResult& tuned() const { return tuned_; }
  const SvmModel& model() const { return *model_; }

 private:
  CvGrid grid_;
  TuneResult tuned_;
  std::optional<SvmModel> model_;
};

}  // namespace ssdl
