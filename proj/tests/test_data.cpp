#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "doctest.h"
#include "ssdl/data.hpp"
#include "ssdl/error.hpp"

namespace fs = std::filesystem;
using namespace ssdl;

namespace {

fs::path write_temp(const std::string& name, const std::string& contents) {
  const fs::path path = fs::temp_directory_path() / ("ssdl_test_" + name);
  std::ofstream(path) << contents;
  return path;
}

std::string error_of(const fs::path& path, CsvSchema schema = {}) {
  try {
    load_csv(path, schema);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

Dataset labeled_toy(const std::vector<int>& labels, int dims = 1) {
  Eigen::MatrixXd x(dims, static_cast<Eigen::Index>(labels.size()));
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < dims; ++i) x(i, j) = static_cast<double>(j * (i + 1));
  std::vector<std::optional<int>> l(labels.begin(), labels.end());
  int c = 0;
  for (const int v : labels) c = std::max(c, v + 1);
  std::vector<std::string> names;
  for (int k = 0; k < c; ++k) names.push_back("c" + std::to_string(k));
  return Dataset(std::move(x), std::move(l), std::move(names));
}

}  // namespace

TEST_CASE("load_csv parses features, transposes and indexes classes by first appearance") {
  const auto path = write_temp("basic.csv", "1,2,A\n3,4,B\n5,6,A\n");
  const Dataset ds = load_csv(path);
  CHECK(ds.dims() == 2);
  CHECK(ds.size() == 3);
  CHECK(ds.num_classes() == 2);
  CHECK(ds.labels()[0] == 0);
  CHECK(ds.labels()[1] == 1);
  CHECK(ds.labels()[2] == 0);
  CHECK(ds.features()(0, 1) == 3.0);
  CHECK(ds.features()(1, 2) == 6.0);
  CHECK(ds.class_names()[0] == "A");
}

TEST_CASE("load_csv honors header and label column") {
  const auto path = write_temp("header.csv", "label,f1,f2\nyes, 0.5, 1e-3\nno,2,3\n");
  const Dataset ds = load_csv(path, {0, true});
  CHECK(ds.dims() == 2);
  CHECK(ds.feature_names() == std::vector<std::string>{"f1", "f2"});
  CHECK(ds.features()(1, 0) == doctest::Approx(1e-3));
  CHECK(ds.class_names() == std::vector<std::string>{"yes", "no"});
}

TEST_CASE("load_csv rejects bad input with the row number") {
  CHECK(error_of(write_temp("nan.csv", "1,2,A\n3,nan,B\n")).find("row 2") != std::string::npos);
  CHECK(error_of(write_temp("inf.csv", "1,2,A\ninf,4,B\n")).find("row 2") != std::string::npos);
  CHECK(error_of(write_temp("text.csv", "1,2,A\n3,4,B\n5,x,A\n")).find("row 3") != std::string::npos);
  CHECK(error_of(write_temp("ragged.csv", "1,2,A\n3,B\n")).find("row 2") != std::string::npos);
  CHECK(error_of(write_temp("comma.csv", "1,2,A\n3,4,5,B\n")).find("row 2") != std::string::npos);
  CHECK(error_of(write_temp("empty.csv", "")).find("no data rows") != std::string::npos);
  CHECK(error_of(write_temp("single.csv", "1,2,A\n3,4,A\n")).find("2 classes") != std::string::npos);
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), DataError);
}

TEST_CASE("Sonar loads with the published dimensions") {
  const Dataset ds = load_csv(fs::path(SSDL_DATA_DIR) / "sonar.csv");
  CHECK(ds.size() == 208);
  CHECK(ds.dims() == 60);
  CHECK(ds.num_classes() == 2);
}

TEST_CASE("split sizes on Sonar follow the rounding rule") {
  const Dataset ds = load_csv(fs::path(SSDL_DATA_DIR) / "sonar.csv");
  const Split s = split(ds, 0.3, 0.5, 7);
  CHECK(s.test.size() == 63);
  CHECK(s.labeled_train.size() + s.unlabeled_train.size() == 145);
  // Training per class after a 63-sample test draw: 77 and 68; ceil halves 39 + 34.
  CHECK(s.labeled_train.size() == 73);
}

TEST_CASE("split partitions, stratifies and is deterministic") {
  const Dataset ds = load_csv(fs::path(SSDL_DATA_DIR) / "sonar.csv");
  for (const double ratio : {0.05, 0.1, 0.3, 0.5, 1.0}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Split s = split(ds, 0.3, ratio, seed);
      std::set<std::size_t> all;
      for (const auto* part : {&s.labeled_train, &s.unlabeled_train, &s.test}) {
        CHECK(std::is_sorted(part->begin(), part->end()));
        all.insert(part->begin(), part->end());
      }
      CHECK(all.size() == static_cast<std::size_t>(ds.size()));

      std::map<int, double> total, test, train, labeled;
      for (std::size_t i = 0; i < 208; ++i) total[*ds.labels()[i]] += 1;
      for (const auto i : s.test) test[*ds.labels()[i]] += 1;
      for (const auto i : s.training()) train[*ds.labels()[i]] += 1;
      for (const auto i : s.labeled_train) labeled[*ds.labels()[i]] += 1;
      for (int c = 0; c < 2; ++c) {
        CHECK(std::abs(test[c] - 0.3 * total[c]) < 1.0);
        CHECK(std::abs(labeled[c] - ratio * train[c]) < 1.0);
        CHECK(labeled[c] >= 1.0);
      }
      CHECK(split(ds, 0.3, ratio, seed) == s);
    }
  }
  CHECK(split(ds, 0.3, 1.0, 3).unlabeled_train.empty());
  CHECK(split(ds, 0.3, 0.5, 1) != split(ds, 0.3, 0.5, 2));
}

TEST_CASE("split errors") {
  const Dataset ds = labeled_toy({0, 0, 0, 0, 1, 1});
  CHECK_THROWS_AS(split(ds, 0.0, 0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(split(ds, 0.3, 0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(split(ds, 0.3, 1.5, 0), std::invalid_argument);
  // Class 1 has two samples; a 0.9 test fraction leaves it no training sample.
  CHECK_THROWS_AS(split(ds, 0.9, 0.5, 0), DataError);
  std::vector<std::optional<int>> partial{0, 1, std::nullopt};
  const Dataset unlabeled(Eigen::MatrixXd::Zero(1, 3), partial, {"a", "b"});
  CHECK_THROWS_AS(split(unlabeled, 0.3, 0.5, 0), DataError);
}

TEST_CASE("standardize uses training statistics only") {
  SUBCASE("two-sample toy") {
    Eigen::MatrixXd x(1, 3);
    x << 0.0, 2.0, 100.0;
    const Dataset ds(x, {0, 1, 0}, {"a", "b"});
    const Split s{{0}, {1}, {2}, 0};
    const Dataset z = standardize(ds, s);
    CHECK(z.features()(0, 0) == doctest::Approx(-1.0));
    CHECK(z.features()(0, 1) == doctest::Approx(1.0));
    CHECK(z.features()(0, 2) == doctest::Approx(99.0));
  }
  SUBCASE("constant row becomes zero") {
    Eigen::MatrixXd x(2, 4);
    x << 5, 5, 5, 5, 1, 2, 3, 4;
    const Dataset ds(x, {0, 1, 0, 1}, {"a", "b"});
    const Split s{{0, 1}, {2}, {3}, 0};
    const Dataset z = standardize(ds, s);
    CHECK(z.features().row(0).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("Sonar: zero training means, unit variance, idempotent") {
    const Dataset ds = load_csv(fs::path(SSDL_DATA_DIR) / "sonar.csv");
    const Split s = split(ds, 0.3, 0.3, 11);
    const Dataset z = standardize(ds, s);
    const Eigen::MatrixXd train = z.columns(s.training());
    CHECK(train.rowwise().mean().cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::VectorXd var = train.array().square().rowwise().mean();
    CHECK((var.array() - 1.0).abs().maxCoeff() < 1e-10);
    const Dataset zz = standardize(z, s);
    CHECK((zz.features() - z.features()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("one_hot") {
  const Dataset ds = labeled_toy({0, 1, 0, 1});
  const Split s{{0, 1, 2}, {}, {3}, 0};
  const LabelMatrix y = one_hot(s, ds);
  Eigen::MatrixXd expected(2, 3);
  expected << 1, 0, 1, 0, 1, 0;
  CHECK(y.onehot == expected);
  CHECK((y.onehot.colwise().sum().array() == 1.0).all());

  const Split single{{0, 2}, {}, {1}, 0};
  const LabelMatrix y1 = one_hot(single, ds);
  CHECK(y1.onehot.rows() == 2);
  CHECK(y1.onehot.row(1).sum() == 0.0);
  CHECK((y1.onehot.colwise().sum().array() == 1.0).all());
}

TEST_CASE("learning_set hides unlabeled labels") {
  const Dataset ds = labeled_toy({0, 1, 0, 1, 1});
  const Split s{{0, 1}, {2, 3}, {4}, 0};
  const LearningSet set = learning_set(ds, s);
  CHECK(set.labeled.cols() == 2);
  CHECK(set.unlabeled.cols() == 2);
  CHECK(set.labels == std::vector<int>{0, 1});
  CHECK(set.training().cols() == 4);
  CHECK(unlabeled_truth_for_scoring(ds, s) == std::vector<int>{0, 1});
}
