#include "ssdl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "ssdl/error.hpp"
#include "ssdl/graph.hpp"
#include "ssdl/kernels.hpp"
#include "ssdl/sparse_coding.hpp"

namespace ssdl {

namespace {

// Runs `fn`, prefixing any library error with the pipeline stage it came from.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  const auto tag = [name](const std::exception& e) { return std::string(name) + ": " + e.what(); };
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(tag(e));
  } catch (const DataError& e) {
    throw DataError(tag(e));
  } catch (const NumericalError& e) {
    throw NumericalError(tag(e));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(tag(e));
  }
}

}  // namespace

std::unique_ptr<Classifier> default_classifier(const ExperimentConfig& config,
                                               std::size_t num_labeled) {
  CvGrid grid = config.grid;
  grid.folds = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(grid.folds), num_labeled));
  return std::make_unique<TunedRbfSvm>(std::move(grid));
}

RunOutcome run_on_split(const Dataset& prepared, const Split& split,
                        const ExperimentConfig& config, double eta, std::uint64_t seed,
                        const ClassifierFactory& make_classifier) {
  RunOutcome out;
  out.split = split;

  const LearningSet learn = stage("split", [&] { return learning_set(prepared, split); });
  const KernelMatrix b = label_kernel(learn.label_matrix());
  const GraphWeights graph =
      stage("graph", [&] { return nn_weights(learn.labeled, learn.unlabeled); });
  const Eigen::MatrixXd phi =
      stage("objective", [&] { return build_phi(learn.labeled, learn.training(), b, graph, eta); });
  out.dictionary = stage("dictionary", [&] { return learn_dictionary(phi, config.k, eta); });

  const SparseCode train_codes =
      stage("encode", [&] { return encode(out.dictionary, learn.labeled, config.lambda); });
  const SparseCode test_codes = stage(
      "encode", [&] { return encode(out.dictionary, prepared.columns(split.test), config.lambda); });
  out.code_density = train_codes.density;

  auto classifier = make_classifier(config, learn.labels.size());
  stage("classifier", [&] { classifier->fit(train_codes.alpha, learn.labels, seed); });
  const auto predicted = stage("classifier", [&] { return classifier->predict(test_codes.alpha); });
  out.accuracy = accuracy_percent(labels_of(prepared, split.test), predicted);
  return out;
}

RunOutcome run_once(const Dataset& ds, const ExperimentConfig& config, double ratio, double eta,
                    std::uint64_t seed, const ClassifierFactory& make_classifier) {
  const Split s = stage("split", [&] { return split(ds, config.test_fraction, ratio, seed); });
  if (!config.standardize) return run_on_split(ds, s, config, eta, seed, make_classifier);
  const Dataset prepared = standardize(ds, s);
  return run_on_split(prepared, s, config, eta, seed, make_classifier);
}

RunOutcome run_once(const ExperimentConfig& config, double ratio, double eta, std::uint64_t seed) {
  const Dataset ds = stage("load", [&] { return load_csv(config.dataset, config.schema); });
  return run_once(ds, config, ratio, eta, seed, default_classifier);
}

const CellSummary* ExperimentResult::cell(double ratio, double eta) const {
  for (const auto& c : cells) {
    if (c.ratio == ratio && c.eta == eta) return &c;
  }
  return nullptr;
}

const EtaStar* ExperimentResult::best(double ratio) const {
  for (const auto& e : eta_star) {
    if (e.ratio == ratio) return &e;
  }
  return nullptr;
}

ExperimentResult summarize(std::vector<RunRecord> records) {
  ExperimentResult result;
  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.ratio, a.eta, a.seed) < std::tie(b.ratio, b.eta, b.seed);
  });
  result.records = std::move(records);

  std::map<std::pair<double, double>, std::vector<double>> groups;
  for (const auto& r : result.records) groups[{r.ratio, r.eta}].push_back(r.accuracy);
  for (const auto& [key, values] : groups) {
    CellSummary cell{key.first, key.second, 0.0, 0.0, values.size()};
    for (const double v : values) cell.mean += v;
    cell.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (const double v : values) ss += (v - cell.mean) * (v - cell.mean);
      cell.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    result.cells.push_back(cell);
  }
  for (const auto& cell : result.cells) {
    if (result.eta_star.empty() || result.eta_star.back().ratio != cell.ratio) {
      result.eta_star.push_back({cell.ratio, cell.eta, cell.mean});
    } else if (cell.mean > result.eta_star.back().mean) {
      result.eta_star.back() = {cell.ratio, cell.eta, cell.mean};
    }
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunObserver& observer,
                                const ClassifierFactory& make_classifier) {
  config.validate();
  const Dataset ds = stage("load", [&] { return load_csv(config.dataset, config.schema); });
  const std::string name = config.dataset.stem().string();

  auto ratios = config.labeled_ratios;
  auto etas = config.etas;
  std::sort(ratios.begin(), ratios.end());
  std::sort(etas.begin(), etas.end());

  std::vector<RunRecord> done;
  std::set<std::tuple<double, double, std::uint64_t>> have;
  if (config.resume && !config.records_path.empty() && std::filesystem::exists(config.records_path)) {
    for (auto& r : load_records(config.records_path)) {
      if (r.dataset != name) throw DataError("resume: records file belongs to another dataset");
      have.emplace(r.ratio, r.eta, r.seed);
      done.push_back(std::move(r));
    }
  }

  std::ofstream sink;
  if (!config.records_path.empty()) {
    sink.open(config.records_path);
    if (!sink) throw DataError("cannot write " + config.records_path.string());
    write_records(sink, done);
    sink.flush();
  }

  std::vector<RunRecord> records = done;
  for (const double ratio : ratios) {
    for (const double eta : etas) {
      for (int rep = 0; rep < config.repetitions; ++rep) {
        const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(rep);
        if (have.contains({ratio, eta, seed})) continue;
        const RunOutcome outcome = [&] {
          try {
            return run_once(ds, config, ratio, eta, seed, make_classifier);
          } catch (const std::exception& e) {
            const std::string where = "run ratio=" + format_number(ratio) +
                                      " eta=" + format_number(eta) +
                                      " seed=" + std::to_string(seed) + ": ";
            if (dynamic_cast<const NumericalError*>(&e)) throw NumericalError(where + e.what());
            if (dynamic_cast<const ConfigError*>(&e)) throw ConfigError(where + e.what());
            if (dynamic_cast<const std::invalid_argument*>(&e)) {
              throw std::invalid_argument(where + e.what());
            }
            throw DataError(where + e.what());
          }
        }();
        RunRecord record{name, ratio, eta, seed, outcome.accuracy};
        if (sink.is_open()) {
          sink << record.dataset << ',' << format_number(record.ratio) << ','
               << format_number(record.eta) << ',' << record.seed << ','
               << format_number(record.accuracy) << '\n';
          sink.flush();
        }
        if (observer) observer(record, outcome);
        records.push_back(std::move(record));
      }
    }
  }
  if (sink.is_open()) sink.close();

  ExperimentResult result = summarize(std::move(records));
  if (!config.records_path.empty()) emit_report(result, config.records_path, config.table_path);
  return result;
}

}  // namespace ssdl
