#pragma once

#include <Eigen/Dense>

#include "ssdl/data.hpp"

namespace ssdl {

enum class KernelKind { kLinear, kRbf, kDelta };

/// Symmetric m x m Gram matrix tagged with the kernel that produced it.
struct KernelMatrix {
  Eigen::MatrixXd values;
  KernelKind kind = KernelKind::kLinear;

  Eigen::Index size() const { return values.rows(); }
};

/// K = A^T A for the columns of A.
KernelMatrix linear_kernel(const Eigen::MatrixXd& a);

/// Delta kernel on labels, B = Y^T Y: B(i,j) = 1 iff samples i and j share a class.
KernelMatrix label_kernel(const LabelMatrix& y);

/// K(i,j) = exp(-gamma * |a_i - a_j|^2). Throws std::invalid_argument for gamma <= 0.
KernelMatrix rbf_kernel(const Eigen::MatrixXd& a, double gamma);

/// Rectangular RBF kernel between the columns of `a` (rows of the result)
/// and the columns of `b`.
Eigen::MatrixXd rbf_cross(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double gamma);

/// H M H with H = I - e e^T / m, applied by subtracting row and column means.
Eigen::MatrixXd double_center(const Eigen::MatrixXd& m);

/// Empirical HSIC, tr(K H B H) / (m - 1)^2.
///
/// Evaluated as the elementwise inner product of the two double-centered
/// kernels, which makes hsic(K, B) and hsic(B, K) bit-identical.
double hsic(const KernelMatrix& k, const KernelMatrix& b);

}  // namespace ssdl
