// Command-line front end: full sweeps, single runs, and report regeneration.
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "ssdl/error.hpp"
#include "ssdl/harness.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-supervised HSIC dictionary learning with soft-threshold sparse coding"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the full ratio x eta x repetition sweep");
  std::string config_path;
  run->add_option("--config", config_path, "Experiment config file")->required();

  auto* once = app.add_subcommand("once", "Run one split and print the test accuracy");
  std::string dataset;
  double ratio = 0.5;
  double eta = 0.0;
  std::uint64_t seed = 0;
  int k = ssdl::kDefaultAtoms;
  double lambda = 0.1;
  int label_col = -1;
  bool header = false;
  bool no_standardize = false;
  double test_fraction = 0.3;
  std::string dictionary_out;
  once->add_option("--dataset", dataset, "CSV file")->required();
  once->add_option("--ratio", ratio, "Labeled fraction of the training set")->required();
  once->add_option("--eta", eta, "Weight of the unlabeled graph term in [0, 1]")->required();
  once->add_option("--seed", seed, "Split and fold seed")->required();
  once->add_option("--k", k, "Dictionary atoms")->capture_default_str();
  once->add_option("--lambda", lambda, "Sparsity level")->capture_default_str();
  once->add_option("--label-col", label_col, "Label column, negative counts from the end")
      ->capture_default_str();
  once->add_flag("--header", header, "First CSV row is a header");
  once->add_option("--test-fraction", test_fraction)->capture_default_str();
  once->add_flag("--no-standardize", no_standardize, "Skip z-scoring of features");
  once->add_option("--dictionary-out", dictionary_out, "Write the learned dictionary here");

  auto* report = app.add_subcommand("report", "Rebuild the summary table from a records file");
  std::string records_path;
  std::string out_path;
  report->add_option("--records", records_path, "Records file from a sweep")->required();
  report->add_option("--out", out_path, "Table output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) {
      const auto config = ssdl::load_config(config_path);
      const auto result = ssdl::run_experiment(config);
      std::cout << ssdl::format_table(result);
      if (config.records_path.empty()) {
        ssdl::write_records(std::cout, result.records);
      }
    } else if (once->parsed()) {
      ssdl::ExperimentConfig config;
      config.dataset = dataset;
      config.schema = {label_col, header};
      config.k = k;
      config.lambda = lambda;
      config.test_fraction = test_fraction;
      config.standardize = !no_standardize;
      config.labeled_ratios = {ratio};
      config.etas = {eta};
      config.validate();
      const auto outcome = ssdl::run_once(config, ratio, eta, seed);
      if (!dictionary_out.empty()) ssdl::save_dictionary(dictionary_out, outcome.dictionary);
      std::printf("accuracy %s\n", ssdl::format_number(outcome.accuracy).c_str());
      std::printf("labeled %zu unlabeled %zu test %zu\n", outcome.split.labeled_train.size(),
                  outcome.split.unlabeled_train.size(), outcome.split.test.size());
    } else if (report->parsed()) {
      const auto result = ssdl::summarize(ssdl::load_records(records_path));
      if (result.records.empty()) throw ssdl::DataError("report: no run records");
      std::ofstream out(out_path);
      if (!out) throw ssdl::DataError("cannot write " + out_path);
      out << ssdl::format_table(result);
    }
  } catch (const ssdl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ssdl::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ssdl::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
