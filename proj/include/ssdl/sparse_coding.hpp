#pragma once

#include <Eigen/Dense>

#include "ssdl/dictionary.hpp"

namespace ssdl {

/// Sparse coefficients for m samples against a dictionary of k atoms.
struct SparseCode {
  Eigen::MatrixXd alpha;  // k x m
  double lambda = 0.0;
  double density = 0.0;   // fraction of nonzero entries
};

/// S(t) = t - lambda/2 above lambda/2, t + lambda/2 below -lambda/2, else 0.
///
/// The threshold is half of lambda: this is the exact minimizer of
/// 1/2 (x - a)^2 + (lambda/2) |a|. Tools that threshold at lambda solve the
/// same problem with the penalty written as lambda |a|.
double soft_threshold(double t, double lambda);

/// alpha = S_lambda(D^T X) elementwise. For column-orthonormal D this
/// minimizes 1/2 |x - D a|^2 + (lambda/2) |a|_1 per column.
SparseCode encode(const Dictionary& dict, const Eigen::MatrixXd& x, double lambda);

}  // namespace ssdl
