#pragma once

#include <filesystem>
#include <iosfwd>

#include <Eigen/Dense>

#include "ssdl/data.hpp"
#include "ssdl/graph.hpp"
#include "ssdl/kernels.hpp"

namespace ssdl {

inline constexpr int kDefaultAtoms = 8;

/// Column-orthonormal d x k projection basis together with the eigenvalues
/// of the objective matrix it was extracted from.
struct Dictionary {
  Eigen::MatrixXd atoms;        // d x k
  Eigen::VectorXd eigenvalues;  // k, descending
  double eta = 0.0;

  Eigen::Index dims() const { return atoms.rows(); }
  Eigen::Index size() const { return atoms.cols(); }
};

/// Phi = (1 - eta) X_l H B H X_l^T - eta X L X^T.
///
/// `labeled` is d x n_l, `training` is d x n with the labeled columns first
/// (the graph's ordering), `label_kernel` is n_l x n_l. The result is
/// symmetrized.
Eigen::MatrixXd build_phi(const Eigen::MatrixXd& labeled, const Eigen::MatrixXd& training,
                          const KernelMatrix& label_kernel, const GraphWeights& graph,
                          double eta);

/// Convenience overload assembling the matrices from a split.
Eigen::MatrixXd build_phi(const Dataset& ds, const Split& split, const KernelMatrix& label_kernel,
                          const GraphWeights& graph, double eta);

/// Eigenvectors of the k algebraically largest eigenvalues of phi.
///
/// Each atom is signed so its largest-magnitude entry (first such index on
/// ties) is positive. Inputs asymmetric beyond 1e-8 (relative to the largest
/// entry) are rejected; smaller asymmetry is averaged away.
Dictionary learn_dictionary(const Eigen::MatrixXd& phi, int k, double eta = 0.0);

/// tr(D^T Phi D).
double trace_objective(const Dictionary& dict, const Eigen::MatrixXd& phi);

// Text format: a header line "d k eta", a line of k eigenvalues, then d rows
// of k atom entries.
void write_dictionary(std::ostream& out, const Dictionary& dict);
Dictionary read_dictionary(std::istream& in);
void save_dictionary(const std::filesystem::path& path, const Dictionary& dict);
Dictionary load_dictionary(const std::filesystem::path& path);

}  // namespace ssdl
