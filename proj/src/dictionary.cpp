#include "ssdl/dictionary.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ssdl/error.hpp"
#include "ssdl/symmetric_eigen.hpp"

namespace ssdl {

Eigen::MatrixXd build_phi(const Eigen::MatrixXd& labeled, const Eigen::MatrixXd& training,
                          const KernelMatrix& label_kernel, const GraphWeights& graph,
                          double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("build_phi: eta must be in [0, 1]");
  if (label_kernel.size() != labeled.cols() || label_kernel.values.cols() != labeled.cols()) {
    throw std::invalid_argument("build_phi: label kernel size does not match labeled samples");
  }
  if (graph.size() != training.cols()) {
    throw std::invalid_argument("build_phi: graph size does not match training samples");
  }
  if (training.rows() != labeled.rows()) throw std::invalid_argument("build_phi: dimension mismatch");

  const Eigen::MatrixXd supervised = labeled * double_center(label_kernel.values) * labeled.transpose();
  const Eigen::MatrixXd smoothness = training * (graph.laplacian() * training.transpose());
  Eigen::MatrixXd phi = (1.0 - eta) * supervised - eta * smoothness;
  return 0.5 * (phi + phi.transpose());
}

Eigen::MatrixXd build_phi(const Dataset& ds, const Split& split, const KernelMatrix& label_kernel,
                          const GraphWeights& graph, double eta) {
  return build_phi(ds.columns(split.labeled_train), ds.columns(split.training()), label_kernel,
                   graph, eta);
}

Dictionary learn_dictionary(const Eigen::MatrixXd& phi, int k, double eta) {
  if (phi.rows() != phi.cols()) throw std::invalid_argument("learn_dictionary: phi not square");
  if (k < 1 || k > phi.rows()) {
    throw std::invalid_argument("learn_dictionary: k must lie in [1, " +
                                std::to_string(phi.rows()) + "]");
  }
  const double scale = std::max(1.0, phi.cwiseAbs().maxCoeff());
  if ((phi - phi.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw std::invalid_argument("learn_dictionary: phi is not symmetric");
  }

  const EigenDecomposition eig = jacobi_eigen(phi);
  Dictionary dict{eig.vectors.leftCols(k), eig.values.head(k), eta};
  for (Eigen::Index j = 0; j < dict.atoms.cols(); ++j) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < dict.atoms.rows(); ++i) {
      if (std::abs(dict.atoms(i, j)) > best) {
        best = std::abs(dict.atoms(i, j));
        pivot = i;
      }
    }
    if (dict.atoms(pivot, j) < 0.0) dict.atoms.col(j) *= -1.0;
  }
  return dict;
}

double trace_objective(const Dictionary& dict, const Eigen::MatrixXd& phi) {
  return (dict.atoms.transpose() * phi * dict.atoms).trace();
}

void write_dictionary(std::ostream& out, const Dictionary& dict) {
  // Shortest form that reads back to the same double.
  const auto num = [](double v) {
    std::array<char, 32> buf{};
    return std::string(buf.data(), std::to_chars(buf.data(), buf.data() + buf.size(), v).ptr);
  };
  out << dict.dims() << ' ' << dict.size() << ' ' << num(dict.eta) << '\n';
  for (Eigen::Index j = 0; j < dict.size(); ++j) out << (j ? " " : "") << num(dict.eigenvalues(j));
  out << '\n';
  for (Eigen::Index i = 0; i < dict.dims(); ++i) {
    for (Eigen::Index j = 0; j < dict.size(); ++j) out << (j ? " " : "") << num(dict.atoms(i, j));
    out << '\n';
  }
}

Dictionary read_dictionary(std::istream& in) {
  Eigen::Index d = 0;
  Eigen::Index k = 0;
  Dictionary dict;
  if (!(in >> d >> k >> dict.eta) || d < 1 || k < 1 || k > d) {
    throw DataError("dictionary: bad header");
  }
  dict.eigenvalues.resize(k);
  dict.atoms.resize(d, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (!(in >> dict.eigenvalues(j))) throw DataError("dictionary: truncated eigenvalue line");
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!(in >> dict.atoms(i, j))) {
        throw DataError("dictionary: truncated at row " + std::to_string(i + 1));
      }
    }
  }
  return dict;
}

void save_dictionary(const std::filesystem::path& path, const Dictionary& dict) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_dictionary(out, dict);
}

Dictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_dictionary(in);
}

}  // namespace ssdl
