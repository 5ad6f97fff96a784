#include "ssdl/graph.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace ssdl {

GraphWeights::GraphWeights(Eigen::SparseMatrix<double> weights, Eigen::Index num_labeled)
    : weights_(std::move(weights)), num_labeled_(num_labeled) {
  if (weights_.rows() != weights_.cols()) throw std::invalid_argument("graph: W must be square");
  if (num_labeled_ < 0 || num_labeled_ > weights_.rows()) {
    throw std::invalid_argument("graph: labeled count out of range");
  }
  weights_.makeCompressed();
  degrees_ = Eigen::VectorXd::Zero(weights_.rows());
  for (Eigen::Index col = 0; col < weights_.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(weights_, col); it; ++it) {
      degrees_(it.row()) += it.value();
    }
  }
}

Eigen::SparseMatrix<double> GraphWeights::laplacian() const {
  Eigen::SparseMatrix<double> q(size(), size());
  std::vector<Eigen::Triplet<double>> diag;
  diag.reserve(static_cast<std::size_t>(size()));
  for (Eigen::Index i = 0; i < size(); ++i) diag.emplace_back(i, i, degrees_(i));
  q.setFromTriplets(diag.begin(), diag.end());
  return q - weights_;
}

GraphWeights nn_weights(const Eigen::MatrixXd& labeled, const Eigen::MatrixXd& unlabeled) {
  if (labeled.cols() < 1) throw std::invalid_argument("nn_weights: need a labeled sample");
  if (unlabeled.cols() > 0 && unlabeled.rows() != labeled.rows()) {
    throw std::invalid_argument("nn_weights: dimension mismatch");
  }
  const Eigen::Index n_l = labeled.cols();
  const Eigen::Index n = n_l + unlabeled.cols();

  std::vector<Eigen::Triplet<double>> edges;
  edges.reserve(2 * static_cast<std::size_t>(unlabeled.cols()));
  for (Eigen::Index u = 0; u < unlabeled.cols(); ++u) {
    Eigen::Index best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index l = 0; l < n_l; ++l) {
      const double d2 = (labeled.col(l) - unlabeled.col(u)).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = l;
      }
    }
    edges.emplace_back(best, n_l + u, 1.0);
    edges.emplace_back(n_l + u, best, 1.0);
  }
  Eigen::SparseMatrix<double> w(n, n);
  w.setFromTriplets(edges.begin(), edges.end());
  return GraphWeights(std::move(w), n_l);
}

double laplacian_quadratic(const Eigen::MatrixXd& z, const GraphWeights& graph) {
  if (z.cols() != graph.size()) throw std::invalid_argument("laplacian_quadratic: size mismatch");
  const Eigen::MatrixXd zl = z * graph.laplacian();
  return (zl.array() * z.array()).sum();
}

}  // namespace ssdl
