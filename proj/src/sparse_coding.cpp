#include "ssdl/sparse_coding.hpp"

#include <stdexcept>

namespace ssdl {

double soft_threshold(double t, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("soft_threshold: lambda must be nonnegative");
  const double half = 0.5 * lambda;
  if (t > half) return t - half;
  if (t < -half) return t + half;
  return 0.0;
}

SparseCode encode(const Dictionary& dict, const Eigen::MatrixXd& x, double lambda) {
  if (x.rows() != dict.dims()) throw std::invalid_argument("encode: dimension mismatch");
  if (!(lambda >= 0.0)) throw std::invalid_argument("encode: lambda must be nonnegative");
  SparseCode code;
  code.lambda = lambda;
  code.alpha = (dict.atoms.transpose() * x).unaryExpr([lambda](double t) {
    return soft_threshold(t, lambda);
  });
  const auto entries = code.alpha.size();
  code.density = entries == 0 ? 0.0
                              : static_cast<double>((code.alpha.array() != 0.0).count()) /
                                    static_cast<double>(entries);
  return code;
}

}  // namespace ssdl
