#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace ssdl {

/// Symmetric proximity graph over the training samples, ordered as
/// [labeled..., unlabeled...].
///
/// Edges only join a labeled and an unlabeled sample. The graph is built in
/// the (standardized) input space and stays fixed while the dictionary is
/// solved for, which is what keeps that solve a single eigenproblem.
class GraphWeights {
 public:
  GraphWeights(Eigen::SparseMatrix<double> weights, Eigen::Index num_labeled);

  const Eigen::SparseMatrix<double>& weights() const { return weights_; }
  /// q_ii = sum_j w_ij.
  const Eigen::VectorXd& degrees() const { return degrees_; }
  /// L = Q - W.
  Eigen::SparseMatrix<double> laplacian() const;

  Eigen::Index size() const { return weights_.rows(); }
  Eigen::Index num_labeled() const { return num_labeled_; }

 private:
  Eigen::SparseMatrix<double> weights_;
  Eigen::VectorXd degrees_;
  Eigen::Index num_labeled_;
};

/// Links every unlabeled column to its nearest labeled column (Euclidean,
/// ties to the lowest labeled index) with a symmetric unit weight.
GraphWeights nn_weights(const Eigen::MatrixXd& labeled, const Eigen::MatrixXd& unlabeled);

/// tr(Z L Z^T), equal to 1/2 sum_ij w_ij |z_i - z_j|^2 over all ordered pairs.
double laplacian_quadratic(const Eigen::MatrixXd& z, const GraphWeights& graph);

}  // namespace ssdl
