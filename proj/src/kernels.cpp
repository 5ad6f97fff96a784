#include "ssdl/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace ssdl {

namespace {

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("kernel: dimension mismatch");
  Eigen::MatrixXd d2(a.cols(), b.cols());
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
      d2(i, j) = (a.col(i) - b.col(j)).squaredNorm();
    }
  }
  return d2;
}

}  // namespace

KernelMatrix linear_kernel(const Eigen::MatrixXd& a) {
  if (a.cols() < 1) throw std::invalid_argument("linear_kernel: no samples");
  Eigen::MatrixXd k = a.transpose() * a;
  // Mirror the upper triangle so the result is exactly symmetric.
  k.triangularView<Eigen::StrictlyLower>() = k.transpose();
  return {std::move(k), KernelKind::kLinear};
}

KernelMatrix label_kernel(const LabelMatrix& y) {
  return {y.onehot.transpose() * y.onehot, KernelKind::kDelta};
}

KernelMatrix rbf_kernel(const Eigen::MatrixXd& a, double gamma) {
  Eigen::MatrixXd k = rbf_cross(a, a, gamma);
  k.diagonal().setOnes();
  return {std::move(k), KernelKind::kRbf};
}

Eigen::MatrixXd rbf_cross(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("rbf kernel: gamma must be positive");
  return (-gamma * squared_distances(a, b).array()).exp().matrix();
}

Eigen::MatrixXd double_center(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd row_means = m.rowwise().mean();
  const Eigen::RowVectorXd col_means = m.colwise().mean();
  const double grand = m.mean();
  Eigen::MatrixXd c = m;
  c.colwise() -= row_means;
  c.rowwise() -= col_means;
  c.array() += grand;
  return c;
}

double hsic(const KernelMatrix& k, const KernelMatrix& b) {
  if (k.size() != b.size() || k.values.cols() != k.size() || b.values.cols() != b.size()) {
    throw std::invalid_argument("hsic: kernels must be square and of equal size");
  }
  const Eigen::Index m = k.size();
  if (m < 2) throw std::invalid_argument("hsic: need at least 2 samples");
  // tr(K H B H) = tr((H K H)(H B H)) since H is idempotent; for symmetric
  // kernels that trace is the elementwise inner product.
  const double trace = (double_center(k.values).array() * double_center(b.values).array()).sum();
  const double scale = static_cast<double>(m - 1);
  return trace / (scale * scale);
}

}  // namespace ssdl
