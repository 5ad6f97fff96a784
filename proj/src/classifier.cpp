#include "ssdl/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ssdl/error.hpp"
#include "ssdl/kernels.hpp"
#include "ssdl/random.hpp"

namespace ssdl {

namespace {

constexpr double kTau = 1e-12;

std::array<int, 2> binary_classes(std::span<const int> labels) {
  if (labels.empty()) throw DataError("svm: no training samples");
  const auto [lo, hi] = std::minmax_element(labels.begin(), labels.end());
  if (*lo == *hi) throw DataError("svm: training labels contain a single class");
  for (const int l : labels) {
    if (l != *lo && l != *hi) throw DataError("svm: more than two classes (binary only)");
  }
  return {*lo, *hi};
}

}  // namespace

SvmModel train_svm(const Eigen::MatrixXd& codes, std::span<const int> labels, double gamma,
                   double c, double tolerance) {
  if (codes.cols() != static_cast<Eigen::Index>(labels.size())) {
    throw std::invalid_argument("train_svm: label count does not match samples");
  }
  if (!(c > 0.0)) throw std::invalid_argument("train_svm: C must be positive");
  SvmModel model;
  model.classes = binary_classes(labels);
  model.gamma = gamma;
  model.c = c;

  const Eigen::Index n = codes.cols();
  const Eigen::MatrixXd k = rbf_kernel(codes, gamma).values;
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = labels[static_cast<std::size_t>(i)] == model.classes[0] ? 1.0 : -1.0;
  }

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);
  const auto in_up = [&](Eigen::Index t) {
    return (y(t) > 0 && alpha(t) < c) || (y(t) < 0 && alpha(t) > 0);
  };
  const auto in_low = [&](Eigen::Index t) {
    return (y(t) > 0 && alpha(t) > 0) || (y(t) < 0 && alpha(t) < c);
  };

  const long max_iter = std::max<long>(10'000'000L, 100L * static_cast<long>(n));
  model.converged = false;
  for (; model.iterations < max_iter; ++model.iterations) {
    Eigen::Index i = -1;
    Eigen::Index j = -1;
    double up_max = -std::numeric_limits<double>::infinity();
    double low_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      const double v = -y(t) * grad(t);
      if (in_up(t) && v > up_max) {
        up_max = v;
        i = t;
      }
      if (in_low(t) && v < low_min) {
        low_min = v;
        j = t;
      }
    }
    model.kkt_gap = up_max - low_min;
    if (i < 0 || j < 0 || model.kkt_gap < tolerance) {
      model.converged = true;
      break;
    }

    const double old_ai = alpha(i);
    const double old_aj = alpha(j);
    double ai = old_ai;
    double aj = old_aj;
    if (y(i) != y(j)) {
      double quad = k(i, i) + k(j, j) - 2.0 * k(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) { aj = 0.0; ai = diff; }
      } else if (ai < 0.0) {
        ai = 0.0; aj = -diff;
      }
      if (diff > 0.0) {
        if (ai > c) { ai = c; aj = c - diff; }
      } else if (aj > c) {
        aj = c; ai = c + diff;
      }
    } else {
      double quad = k(i, i) + k(j, j) - 2.0 * k(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c) {
        if (ai > c) { ai = c; aj = sum - c; }
      } else if (aj < 0.0) {
        aj = 0.0; ai = sum;
      }
      if (sum > c) {
        if (aj > c) { aj = c; ai = sum - c; }
      } else if (ai < 0.0) {
        ai = 0.0; aj = sum;
      }
    }
    alpha(i) = ai;
    alpha(j) = aj;
    // grad = Q alpha - e with Q_st = y_s y_t K_st.
    const double di = (ai - old_ai) * y(i);
    const double dj = (aj - old_aj) * y(j);
    grad.array() += y.array() * (k.col(i).array() * di + k.col(j).array() * dj);
  }

  // Offset: average y G over free variables, else the midpoint of the
  // feasible interval.
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  int free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y(t) * grad(t);
    if (alpha(t) >= c) {
      if (y(t) < 0) upper = std::min(upper, yg); else lower = std::max(lower, yg);
    } else if (alpha(t) <= 0.0) {
      if (y(t) > 0) upper = std::min(upper, yg); else lower = std::max(lower, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  const double rho = free_count > 0 ? free_sum / free_count : 0.5 * (upper + lower);
  model.bias = -rho;

  for (Eigen::Index t = 0; t < n; ++t) {
    if (alpha(t) > 0.0) model.support_indices.push_back(static_cast<std::size_t>(t));
  }
  const auto s = static_cast<Eigen::Index>(model.support_indices.size());
  model.support_vectors.resize(codes.rows(), s);
  model.dual.resize(s);
  model.signs.resize(s);
  for (Eigen::Index q = 0; q < s; ++q) {
    const auto t = static_cast<Eigen::Index>(model.support_indices[static_cast<std::size_t>(q)]);
    model.support_vectors.col(q) = codes.col(t);
    model.dual(q) = alpha(t);
    model.signs(q) = y(t);
  }
  return model;
}

Eigen::VectorXd decision_values(const SvmModel& model, const Eigen::MatrixXd& codes) {
  if (codes.rows() != model.dims()) throw std::invalid_argument("predict: dimension mismatch");
  if (model.support_vectors.cols() == 0) {
    return Eigen::VectorXd::Constant(codes.cols(), model.bias);
  }
  const Eigen::MatrixXd k = rbf_cross(model.support_vectors, codes, model.gamma);
  const Eigen::VectorXd weights = model.dual.cwiseProduct(model.signs);
  return (k.transpose() * weights).array() + model.bias;
}

std::vector<int> predict(const SvmModel& model, const Eigen::MatrixXd& codes) {
  const Eigen::VectorXd f = decision_values(model, codes);
  std::vector<int> out(static_cast<std::size_t>(f.size()));
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    out[static_cast<std::size_t>(i)] = f(i) >= 0.0 ? model.classes[0] : model.classes[1];
  }
  return out;
}

double accuracy_percent(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("accuracy: size mismatch");
  if (truth.empty()) throw std::invalid_argument("accuracy: no samples");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i] ? 1 : 0;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(truth.size());
}

CvGrid CvGrid::defaults() {
  CvGrid grid;
  for (int e = -7; e <= 3; e += 2) grid.gammas.push_back(std::ldexp(1.0, e));
  for (int e = -3; e <= 7; e += 2) grid.costs.push_back(std::ldexp(1.0, e));
  return grid;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, int folds,
                                                       std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("cross validation needs at least 2 folds");
  if (static_cast<std::size_t>(folds) > labels.size()) {
    throw DataError("cross validation: " + std::to_string(folds) + " folds for " +
                    std::to_string(labels.size()) + " samples");
  }
  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  Rng rng(seed);
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(folds));
  std::size_t next = 0;
  for (const int cls : classes) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    if (classes.size() > 1 && members.size() < 2) {
      throw DataError("cross validation: class " + std::to_string(cls) +
                      " has a single sample, some fold would train without it");
    }
    rng.shuffle(std::span<std::size_t>(members));
    for (const auto m : members) {
      out[next].push_back(m);
      next = (next + 1) % out.size();
    }
  }
  for (auto& fold : out) std::sort(fold.begin(), fold.end());
  return out;
}

TuneResult tune(const Eigen::MatrixXd& codes, std::span<const int> labels, const CvGrid& grid,
                std::uint64_t seed) {
  if (grid.gammas.empty() || grid.costs.empty()) {
    throw std::invalid_argument("tune: empty candidate list");
  }
  const auto folds = stratified_folds(labels, grid.folds, seed);
  auto gammas = grid.gammas;
  auto costs = grid.costs;
  std::sort(gammas.begin(), gammas.end());
  std::sort(costs.begin(), costs.end());

  struct FoldData {
    Eigen::MatrixXd train_codes, val_codes;
    std::vector<int> train_labels, val_labels;
  };
  std::vector<FoldData> prepared;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<char> in_val(labels.size(), 0);
    for (const auto i : folds[f]) in_val[i] = 1;
    FoldData data;
    std::vector<Eigen::Index> train_idx;
    std::vector<Eigen::Index> val_idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      (in_val[i] ? val_idx : train_idx).push_back(static_cast<Eigen::Index>(i));
      (in_val[i] ? data.val_labels : data.train_labels).push_back(labels[i]);
    }
    data.train_codes = codes(Eigen::all, train_idx);
    data.val_codes = codes(Eigen::all, val_idx);
    prepared.push_back(std::move(data));
  }

  TuneResult best;
  best.cv_accuracy = -1.0;
  for (const double c : costs) {
    for (const double gamma : gammas) {
      double total = 0.0;
      for (const auto& fold : prepared) {
        const SvmModel model = train_svm(fold.train_codes, fold.train_labels, gamma, c);
        total += accuracy_percent(fold.val_labels, predict(model, fold.val_codes));
      }
      const double mean = total / static_cast<double>(prepared.size());
      if (mean > best.cv_accuracy + 1e-12) best = {gamma, c, mean};
    }
  }
  return best;
}

void TunedRbfSvm::fit(const Eigen::MatrixXd& codes, std::span<const int> labels,
                      std::uint64_t seed) {
  tuned_ = tune(codes, labels, grid_, seed);
  model_ = train_svm(codes, labels, tuned_.gamma, tuned_.c);
}

std::vector<int> TunedRbfSvm::predict(const Eigen::MatrixXd& codes) const {
  if (!model_) throw std::logic_error("TunedRbfSvm::predict before fit");
  return ssdl::predict(*model_, codes);
}

}  // namespace ssdl
