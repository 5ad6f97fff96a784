#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "ssdl/classifier.hpp"
#include "ssdl/error.hpp"

using namespace ssdl;

namespace {

// Largest gap between the KKT-violating sides, recomputed from the model's
// decision function on its own training set.
double recomputed_kkt_gap(const SvmModel& m, const Eigen::MatrixXd& x, const std::vector<int>& labels) {
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(x.cols());
  for (std::size_t q = 0; q < m.support_indices.size(); ++q) {
    alpha(static_cast<Eigen::Index>(m.support_indices[q])) = m.dual(static_cast<Eigen::Index>(q));
  }
  const Eigen::VectorXd f = decision_values(m, x);
  double up = -1e300, low = 1e300;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const double y = labels[static_cast<std::size_t>(i)] == m.classes[0] ? 1.0 : -1.0;
    const double v = y - f(i);
    if ((y > 0 && alpha(i) < m.c) || (y < 0 && alpha(i) > 0)) up = std::max(up, v);
    if ((y > 0 && alpha(i) > 0) || (y < 0 && alpha(i) < m.c)) low = std::min(low, v);
  }
  return up - low;
}

struct Problem {
  Eigen::MatrixXd x;
  std::vector<int> labels;
};

Problem blobs(int per_class, double separation, double noise, std::uint64_t seed, int dims = 2) {
  std::mt19937_64 rng(seed);
  Problem p{noise * oracle::random_matrix(dims, 2 * per_class, rng), {}};
  for (int j = 0; j < 2 * per_class; ++j) {
    const int cls = j % 2;
    p.x(0, j) += cls == 0 ? -0.5 * separation : 0.5 * separation;
    p.labels.push_back(cls == 0 ? 3 : 5);
  }
  return p;
}

}  // namespace

TEST_CASE("separable pair: both correct, boundary at the midpoint") {
  Eigen::MatrixXd x(1, 2);
  x << -1.0, 1.0;
  const std::vector<int> labels{0, 1};
  const SvmModel m = train_svm(x, labels, 0.5, 1000.0);
  CHECK(predict(m, x) == labels);
  Eigen::MatrixXd mid(1, 1);
  mid << 0.0;
  CHECK(std::abs(decision_values(m, mid)(0)) < 1e-6);
}

TEST_CASE("XOR is fit exactly by an RBF kernel") {
  Eigen::MatrixXd x(2, 4);
  x << 0, 1, 0, 1, 0, 0, 1, 1;
  const std::vector<int> labels{0, 1, 1, 0};
  const SvmModel m = train_svm(x, labels, 1.0, 10.0);
  const Eigen::VectorXd f = decision_values(m, x);
  for (int i = 0; i < 4; ++i) CHECK((labels[static_cast<std::size_t>(i)] == 0 ? f(i) > 0 : f(i) < 0));
  CHECK(accuracy_percent(labels, predict(m, x)) == 100.0);
}

TEST_CASE("conflicting duplicates: bounded, one point lost") {
  Eigen::MatrixXd x(1, 3);
  x << 0.0, 0.0, 4.0;
  const std::vector<int> labels{0, 1, 1};
  const SvmModel m = train_svm(x, labels, 1.0, 10.0);
  CHECK(m.converged);
  CHECK(m.dual.maxCoeff() <= 10.0);
  CHECK(accuracy_percent(labels, predict(m, x)) == doctest::Approx(200.0 / 3.0));
}

TEST_CASE("dual feasibility and KKT tolerance") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Problem p = blobs(20, 1.5, 1.0, seed, 4);
    for (const double c : {0.5, 8.0}) {
      const SvmModel m = train_svm(p.x, p.labels, 0.25, c);
      CHECK(m.converged);
      CHECK(m.kkt_gap < kSvmTolerance);
      CHECK(m.dual.minCoeff() > 0.0);
      CHECK(m.dual.maxCoeff() <= c);
      CHECK(std::abs(m.dual.dot(m.signs)) < 1e-8);
      CHECK(recomputed_kkt_gap(m, p.x, p.labels) < kSvmTolerance + 1e-9);
    }
  }
}

TEST_CASE("prediction rules") {
  SvmModel empty;
  empty.support_vectors.resize(2, 0);
  empty.classes = {1, 4};
  empty.bias = 0.0;
  CHECK(predict(empty, Eigen::MatrixXd::Zero(2, 3)) == std::vector<int>{1, 1, 1});
  CHECK_THROWS_AS(predict(empty, Eigen::MatrixXd::Zero(3, 1)), std::invalid_argument);

  const Problem train = blobs(15, 3.0, 0.7, 21);
  const Problem test = blobs(10, 3.0, 0.7, 22);
  const SvmModel m = train_svm(train.x, train.labels, 0.5, 2.0);
  CHECK(accuracy_percent(train.labels, predict(m, train.x)) == 100.0);

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(test.x.cols()));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(3);
  std::shuffle(perm.begin(), perm.end(), rng);
  const std::vector<int> base = predict(m, test.x);
  const std::vector<int> shuffled = predict(m, test.x(Eigen::all, perm));
  for (std::size_t i = 0; i < perm.size(); ++i) CHECK(shuffled[i] == base[static_cast<std::size_t>(perm[i])]);

  SvmModel padded = m;
  const Eigen::Index s = padded.support_vectors.cols();
  padded.support_vectors.conservativeResize(Eigen::NoChange, s + 1);
  padded.support_vectors.col(s) = padded.support_vectors.col(0);
  padded.dual.conservativeResize(s + 1);
  padded.dual(s) = 0.0;
  padded.signs.conservativeResize(s + 1);
  padded.signs(s) = 1.0;
  CHECK(predict(padded, test.x) == base);
}

TEST_CASE("train_svm errors") {
  CHECK_THROWS_AS(train_svm(Eigen::MatrixXd::Zero(1, 2), std::vector<int>{1, 1}, 1.0, 1.0), DataError);
  CHECK_THROWS_AS(train_svm(Eigen::MatrixXd::Zero(1, 3), std::vector<int>{0, 1, 2}, 1.0, 1.0), DataError);
  CHECK_THROWS_AS(train_svm(Eigen::MatrixXd::Zero(1, 2), std::vector<int>{0, 1}, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(train_svm(Eigen::MatrixXd::Zero(1, 2), std::vector<int>{0, 1}, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(train_svm(Eigen::MatrixXd::Zero(1, 3), std::vector<int>{0, 1}, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("stratified folds partition the samples deterministically") {
  const std::vector<int> labels{0, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 1, 0};
  const auto folds = stratified_folds(labels, 4, 99);
  std::set<std::size_t> seen;
  for (const auto& fold : folds) {
    CHECK(!fold.empty());
    seen.insert(fold.begin(), fold.end());
    const auto zeros = std::count_if(fold.begin(), fold.end(), [&](std::size_t i) { return labels[i] == 0; });
    CHECK(zeros >= 1);
  }
  CHECK(seen.size() == labels.size());
  CHECK(stratified_folds(labels, 4, 99) == folds);
  CHECK(stratified_folds(labels, 4, 100) != folds);

  CHECK_THROWS_AS(stratified_folds(labels, 14, 0), DataError);
  CHECK_THROWS_AS(stratified_folds(std::vector<int>{0, 0, 0, 1}, 2, 0), DataError);
  CHECK_THROWS_AS(stratified_folds(labels, 1, 0), std::invalid_argument);
}

TEST_CASE("tune") {
  const Problem p = blobs(12, 20.0, 0.5, 5);
  SUBCASE("single grid point") {
    const CvGrid grid{{0.3}, {7.0}, 3};
    const TuneResult r = tune(p.x, p.labels, grid, 1);
    CHECK(r.gamma == 0.3);
    CHECK(r.c == 7.0);
  }
  SUBCASE("ties prefer the smallest C, then the smallest gamma") {
    CvGrid grid = CvGrid::defaults();
    std::reverse(grid.gammas.begin(), grid.gammas.end());
    const TuneResult r = tune(p.x, p.labels, grid, 1);
    CHECK(r.cv_accuracy == 100.0);
    CHECK(r.c == 0.125);
    CHECK(r.gamma == 0.0078125);
  }
  SUBCASE("deterministic given the seed") {
    const Problem noisy = blobs(15, 1.0, 1.0, 6, 3);
    const TuneResult a = tune(noisy.x, noisy.labels, CvGrid::defaults(), 42);
    const TuneResult b = tune(noisy.x, noisy.labels, CvGrid::defaults(), 42);
    CHECK(a.gamma == b.gamma);
    CHECK(a.c == b.c);
    CHECK(a.cv_accuracy == b.cv_accuracy);
  }
  CHECK_THROWS_AS(tune(p.x, p.labels, CvGrid{{}, {1.0}, 5}, 0), std::invalid_argument);
}

TEST_CASE("TunedRbfSvm behind the classifier interface") {
  const Problem train = blobs(15, 4.0, 0.8, 7);
  const Problem test = blobs(15, 4.0, 0.8, 8);
  std::unique_ptr<Classifier> clf = std::make_unique<TunedRbfSvm>();
  CHECK_THROWS_AS(clf->predict(test.x), std::logic_error);
  clf->fit(train.x, train.labels, 3);
  CHECK(accuracy_percent(test.labels, clf->predict(test.x)) >= 90.0);
}
