#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ssdl/graph.hpp"

using namespace ssdl;

namespace {

Eigen::MatrixXd dense(const GraphWeights& g) { return Eigen::MatrixXd(g.weights()); }

GraphWeights random_bipartite(Eigen::Index n_l, Eigen::Index n_u, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> weight(0.0, 2.0);
  std::bernoulli_distribution keep(0.4);
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index i = 0; i < n_l; ++i) {
    for (Eigen::Index j = n_l; j < n_l + n_u; ++j) {
      if (!keep(rng)) continue;
      const double w = weight(rng);
      t.emplace_back(i, j, w);
      t.emplace_back(j, i, w);
    }
  }
  Eigen::SparseMatrix<double> w(n_l + n_u, n_l + n_u);
  w.setFromTriplets(t.begin(), t.end());
  return GraphWeights(std::move(w), n_l);
}

}  // namespace

TEST_CASE("no unlabeled samples gives an empty graph") {
  const GraphWeights g = nn_weights(Eigen::MatrixXd::Random(3, 4), Eigen::MatrixXd(3, 0));
  CHECK(g.size() == 4);
  CHECK(g.weights().nonZeros() == 0);
  CHECK(Eigen::MatrixXd(g.laplacian()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("1-D nearest labeled neighbors") {
  Eigen::MatrixXd labeled(1, 2), unlabeled(1, 2);
  labeled << 0, 10;
  unlabeled << 1, 9;
  const Eigen::MatrixXd w = dense(nn_weights(labeled, unlabeled));
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected(0, 2) = expected(2, 0) = 1;
  expected(1, 3) = expected(3, 1) = 1;
  CHECK(w == expected);
}

TEST_CASE("ties go to the lowest labeled index") {
  Eigen::MatrixXd labeled(1, 3), unlabeled(1, 1);
  labeled << 2, -2, 2;
  unlabeled << 0;
  const Eigen::MatrixXd w = dense(nn_weights(labeled, unlabeled));
  CHECK(w(0, 3) == 1.0);
  CHECK(w.row(3).sum() == 1.0);
}

TEST_CASE("nearest neighbors agree with exhaustive search") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd labeled = oracle::random_matrix(3, 6, rng);
    const Eigen::MatrixXd unlabeled = oracle::random_matrix(3, 14, rng);
    const GraphWeights g = nn_weights(labeled, unlabeled);
    const Eigen::MatrixXd w = dense(g);
    CHECK(w == w.transpose());
    CHECK(w.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK(w.minCoeff() >= 0.0);
    CHECK(w.topLeftCorner(6, 6).cwiseAbs().maxCoeff() == 0.0);
    CHECK(w.bottomRightCorner(14, 14).cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index u = 0; u < 14; ++u) {
      const Eigen::VectorXd column = w.col(6 + u);
      CHECK((column.array() != 0.0).count() == 1);
      CHECK(column(oracle::nearest_column(labeled, unlabeled.col(u))) == 1.0);
    }
    const Eigen::MatrixXd l(g.laplacian());
    CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(l).eigenvalues().minCoeff() > -1e-9);
    // Scaling every feature leaves assignments unchanged.
    CHECK(dense(nn_weights(3.7 * labeled, 3.7 * unlabeled)) == w);
  }
}

TEST_CASE("laplacian quadratic form") {
  SUBCASE("two points") {
    Eigen::SparseMatrix<double> w(2, 2);
    w.insert(0, 1) = 1.0;
    w.insert(1, 0) = 1.0;
    const GraphWeights g(w, 1);
    Eigen::MatrixXd z(1, 2);
    z << 0, 2;
    CHECK(laplacian_quadratic(z, g) == doctest::Approx(4.0));
    CHECK(laplacian_quadratic(Eigen::MatrixXd::Constant(3, 2, 1.5), g) == 0.0);
  }
  SUBCASE("matrix form equals double sum, translation invariant") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      const GraphWeights g = random_bipartite(4, 7, rng);
      const Eigen::MatrixXd z = oracle::random_matrix(3, 11, rng);
      const double value = laplacian_quadratic(z, g);
      CHECK(std::abs(value - oracle::laplacian_double_sum(z, dense(g))) < 1e-9);
      const Eigen::MatrixXd shifted = z.colwise() + Eigen::Vector3d(1.0, -2.0, 5.0);
      CHECK(std::abs(laplacian_quadratic(shifted, g) - value) < 1e-9);
    }
  }
  CHECK_THROWS_AS(laplacian_quadratic(Eigen::MatrixXd::Zero(2, 3),
                                      nn_weights(Eigen::MatrixXd::Zero(2, 1), Eigen::MatrixXd::Zero(2, 1))),
                  std::invalid_argument);
}
