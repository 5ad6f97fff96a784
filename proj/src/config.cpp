#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <string_view>
#include <system_error>

#include "ssdl/error.hpp"
#include "ssdl/harness.hpp"

namespace ssdl {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.contains(key); }

  template <typename T>
  T number(const std::string& key, T fallback) {
    const auto it = find(key);
    if (it == entries_.end()) return fallback;
    return parse<T>(it->second.value, key, it->second.line);
  }

  template <typename T>
  std::vector<T> list(const std::string& key, std::vector<T> fallback) {
    const auto it = find(key);
    if (it == entries_.end()) return fallback;
    std::vector<T> out;
    std::string_view rest(it->second.value);
    while (true) {
      const auto comma = rest.find(',');
      out.push_back(parse<T>(trim(rest.substr(0, comma)), key, it->second.line));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return out;
  }

  bool flag(const std::string& key, bool fallback) {
    const auto it = find(key);
    if (it == entries_.end()) return fallback;
    const auto& v = it->second.value;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config line " + std::to_string(it->second.line) + ": '" + key +
                      "' expects true/false");
  }

  std::string text(const std::string& key, std::string fallback) {
    const auto it = find(key);
    return it == entries_.end() ? fallback : it->second.value;
  }

  void reject_unused() const {
    for (const auto& [key, entry] : entries_) {
      if (!used_.contains(key)) {
        throw ConfigError("config line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
      }
    }
  }

 private:
  std::map<std::string, Entry>::const_iterator find(const std::string& key) {
    used_.insert(key);
    return entries_.find(key);
  }

  template <typename T>
  static T parse(std::string_view text, const std::string& key, std::size_t line) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
      throw ConfigError("config line " + std::to_string(line) + ": bad value for '" + key +
                        "': '" + std::string(text) + "'");
    }
    return value;
  }

  std::map<std::string, Entry> entries_;
  std::set<std::string> used_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  if (value.empty()) return {};
  const std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

std::vector<double> ExperimentConfig::eta_sweep(int intervals) {
  if (intervals < 1) throw ConfigError("eta sweep needs at least one interval");
  std::vector<double> etas;
  for (int i = 0; i <= intervals; ++i) etas.push_back(static_cast<double>(i) / intervals);
  return etas;
}

void ExperimentConfig::validate() const {
  if (dataset.empty()) throw ConfigError("config: dataset path missing");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("config: test_fraction must lie in (0, 1)");
  }
  if (labeled_ratios.empty()) throw ConfigError("config: labeled_ratios is empty");
  for (const double r : labeled_ratios) {
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("config: labeled ratio outside (0, 1]");
  }
  if (etas.empty()) throw ConfigError("config: eta list is empty");
  for (const double e : etas) {
    if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("config: eta outside [0, 1]");
  }
  if (k < 1) throw ConfigError("config: k must be positive");
  if (!(lambda >= 0.0)) throw ConfigError("config: lambda must be nonnegative");
  if (repetitions < 1) throw ConfigError("config: repetitions must be at least 1");
  if (grid.gammas.empty() || grid.costs.empty()) throw ConfigError("config: empty CV grid");
  for (const double g : grid.gammas) {
    if (!(g > 0.0)) throw ConfigError("config: cv_gammas must be positive");
  }
  for (const double c : grid.costs) {
    if (!(c > 0.0)) throw ConfigError("config: cv_costs must be positive");
  }
  if (grid.folds < 2) throw ConfigError("config: cv_folds must be at least 2");
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  std::map<std::string, Entry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(view.substr(0, eq)));
    const std::string value(trim(view.substr(eq + 1)));
    if (!entries.try_emplace(key, Entry{value, line_no}).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }

  Reader reader(std::move(entries));
  if (!reader.has("schema_version")) throw ConfigError("config: schema_version missing");
  const int version = reader.number<int>("schema_version", 0);
  if (version != kConfigSchemaVersion) {
    throw ConfigError("config: unsupported schema_version " + std::to_string(version));
  }
  if (!reader.has("dataset")) throw ConfigError("config: dataset missing");
  if (!reader.has("lambda")) throw ConfigError("config: lambda missing (no implicit default)");

  ExperimentConfig config;
  config.dataset = resolve(base_dir, reader.text("dataset", ""));
  const std::string label_col = reader.text("label_col", "last");
  config.schema.label_column =
      label_col == "last" ? -1 : reader.number<int>("label_col", -1);
  config.schema.has_header = reader.flag("header", false);
  config.test_fraction = reader.number("test_fraction", config.test_fraction);
  config.labeled_ratios = reader.list("labeled_ratios", config.labeled_ratios);
  if (reader.has("etas") && reader.has("eta_sweep")) {
    throw ConfigError("config: give either 'etas' or 'eta_sweep', not both");
  }
  if (reader.has("eta_sweep")) {
    config.etas = ExperimentConfig::eta_sweep(reader.number<int>("eta_sweep", 10));
  } else {
    config.etas = reader.list("etas", config.etas);
  }
  config.k = reader.number("k", config.k);
  config.lambda = reader.number("lambda", config.lambda);
  config.repetitions = reader.number("repetitions", config.repetitions);
  config.base_seed = reader.number("base_seed", config.base_seed);
  config.grid.gammas = reader.list("cv_gammas", config.grid.gammas);
  config.grid.costs = reader.list("cv_costs", config.grid.costs);
  config.grid.folds = reader.number("cv_folds", config.grid.folds);
  config.standardize = reader.flag("standardize", config.standardize);
  config.records_path = resolve(base_dir, reader.text("records", ""));
  config.table_path = resolve(base_dir, reader.text("table", ""));
  config.resume = reader.flag("resume", false);
  reader.reject_unused();
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in, path.parent_path());
}

}  // namespace ssdl
