#pragma once

#include <Eigen/Dense>

namespace ssdl {

struct EigenDecomposition {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // column i pairs with values(i)
};

/// Cyclic Jacobi eigensolver for a symmetric matrix. Eigenvalues are sorted
/// in descending algebraic order. Throws NumericalError if the off-diagonal
/// mass does not vanish within the sweep limit.
EigenDecomposition jacobi_eigen(const Eigen::MatrixXd& a, int max_sweeps = 100);

}  // namespace ssdl
