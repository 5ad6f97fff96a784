#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ssdl/classifier.hpp"
#include "ssdl/data.hpp"
#include "ssdl/dictionary.hpp"

namespace ssdl {

inline constexpr int kConfigSchemaVersion = 1;

struct ExperimentConfig {
  std::filesystem::path dataset;
  CsvSchema schema;
  double test_fraction = 0.3;
  std::vector<double> labeled_ratios{0.05, 0.1, 0.3, 0.5};
  std::vector<double> etas = eta_sweep(10);
  int k = kDefaultAtoms;
  double lambda = 0.1;
  int repetitions = 10;
  std::uint64_t base_seed = 0;
  CvGrid grid = CvGrid::defaults();
  bool standardize = true;
  std::filesystem::path records_path;  // empty: keep results in memory only
  std::filesystem::path table_path;
  bool resume = false;

  /// {0, 1/intervals, ..., 1}.
  static std::vector<double> eta_sweep(int intervals);
  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Flat `key = value` text, `#` comments. `schema_version`, `dataset` and
/// `lambda` are required; relative paths resolve against `base_dir`.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

using ClassifierFactory = std::function<std::unique_ptr<Classifier>(const ExperimentConfig&,
                                                                     std::size_t num_labeled)>;

/// Cross-validated RBF SVM on the config's grid, with the fold count capped
/// at the number of labeled samples.
std::unique_ptr<Classifier> default_classifier(const ExperimentConfig& config,
                                               std::size_t num_labeled);

struct RunOutcome {
  double accuracy = 0.0;  // percent on the test partition
  Split split;
  Dictionary dictionary;
  double code_density = 0.0;  // of the labeled training codes
};

/// One pass of the pipeline on a prepared (already standardized, if wanted)
/// dataset and a fixed split. Unlabeled samples enter only through the
/// graph term of the objective matrix; no codes are computed for them.
RunOutcome run_on_split(const Dataset& prepared, const Split& split,
                        const ExperimentConfig& config, double eta, std::uint64_t seed,
                        const ClassifierFactory& make_classifier = default_classifier);

/// split -> standardize -> run_on_split.
RunOutcome run_once(const Dataset& ds, const ExperimentConfig& config, double ratio, double eta,
                    std::uint64_t seed,
                    const ClassifierFactory& make_classifier = default_classifier);

/// Loads config.dataset first.
RunOutcome run_once(const ExperimentConfig& config, double ratio, double eta, std::uint64_t seed);

struct RunRecord {
  std::string dataset;
  double ratio = 0.0;
  double eta = 0.0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct CellSummary {
  double ratio = 0.0;
  double eta = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1) standard deviation; 0 for a single run
  std::size_t count = 0;
};

struct EtaStar {
  double ratio = 0.0;
  double eta = 0.0;  // sweep value with the highest mean, ties to the smaller eta
  double mean = 0.0;
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // ordered by (ratio, eta, seed)
  std::vector<CellSummary> cells;  // ordered by (ratio, eta)
  std::vector<EtaStar> eta_star;   // ordered by ratio

  const CellSummary* cell(double ratio, double eta) const;
  const EtaStar* best(double ratio) const;
};

/// Groups records into per-(ratio, eta) summaries and picks eta* per ratio.
ExperimentResult summarize(std::vector<RunRecord> records);

/// Called after every completed run of a sweep.
using RunObserver = std::function<void(const RunRecord&, const RunOutcome&)>;

/// Full ratios x etas x repetitions sweep. Repetition r uses seed
/// base_seed + r for every eta, so all etas of a repetition share one split.
/// With a records path, each record is appended and flushed as it
/// completes, and the final file is rewritten in canonical order.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunObserver& observer = {},
                                const ClassifierFactory& make_classifier = default_classifier);

// Records: CSV with header `dataset,ratio,eta,seed,accuracy`, numbers in
// shortest round-trip form.
void write_records(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records(std::istream& in);
std::vector<RunRecord> load_records(const std::filesystem::path& path);

/// Human-readable table: rows are ratios (descending), columns eta=0, eta=1,
/// eta*, cells `mean ±std` with two decimals.
std::string format_table(const ExperimentResult& result);

/// Writes the records file and, if `table_path` is nonempty, the table.
/// Throws DataError for an empty result.
void emit_report(const ExperimentResult& result, const std::filesystem::path& records_path,
                 const std::filesystem::path& table_path = {});

/// Shortest decimal string that parses back to `value`.
std::string format_number(double value);

}  // namespace ssdl
