#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "ssdl/error.hpp"
#include "ssdl/harness.hpp"

namespace ssdl {

namespace {

constexpr std::string_view kRecordHeader = "dataset,ratio,eta,seed,accuracy";

template <typename T>
T parse_field(std::string_view text, std::size_t line, const char* field) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw DataError("records line " + std::to_string(line) + ": bad " + field + " '" +
                    std::string(text) + "'");
  }
  return value;
}

std::string cell_text(const CellSummary* cell) {
  if (cell == nullptr) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f ±%.2f", cell->mean, cell->stddev);
  return buf;
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

void write_records(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) {
    out << r.dataset << ',' << format_number(r.ratio) << ',' << format_number(r.eta) << ','
        << r.seed << ',' << format_number(r.accuracy) << '\n';
  }
}

std::vector<RunRecord> read_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader) {
    throw DataError("records: missing header '" + std::string(kRecordHeader) + "'");
  }
  std::vector<RunRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (auto comma = rest.find(','); comma != std::string_view::npos; comma = rest.find(',')) {
      fields.push_back(rest.substr(0, comma));
      rest.remove_prefix(comma + 1);
    }
    fields.push_back(rest);
    if (fields.size() != 5) {
      throw DataError("records line " + std::to_string(line_no) + ": expected 5 fields");
    }
    records.push_back({std::string(fields[0]), parse_field<double>(fields[1], line_no, "ratio"),
                       parse_field<double>(fields[2], line_no, "eta"),
                       parse_field<std::uint64_t>(fields[3], line_no, "seed"),
                       parse_field<double>(fields[4], line_no, "accuracy")});
  }
  return records;
}

std::vector<RunRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_records(in);
}

std::string format_table(const ExperimentResult& result) {
  std::ostringstream out;
  std::string dataset = result.records.empty() ? "" : result.records.front().dataset;
  const std::size_t reps = result.cells.empty() ? 0 : result.cells.front().count;
  out << "# classification rate (%) on " << dataset << ", mean ±std over " << reps
      << " repetitions\n"
      << "# eta* = swept eta with the best mean test accuracy; it is selected on the test\n"
      << "# partition, so the eta* column is an optimistic estimate\n";
  char row[256];
  std::snprintf(row, sizeof row, "%-8s  %-14s  %-14s  %-14s  %s\n", "ratio", "eta=0", "eta=1",
                "eta*", "eta* value");
  out << row;
  for (auto it = result.eta_star.rbegin(); it != result.eta_star.rend(); ++it) {
    const double ratio = it->ratio;
    std::snprintf(row, sizeof row, "%-8s  %-15s  %-15s  %-15s  %s\n", format_number(ratio).c_str(),
                  cell_text(result.cell(ratio, 0.0)).c_str(),
                  cell_text(result.cell(ratio, 1.0)).c_str(),
                  cell_text(result.cell(ratio, it->eta)).c_str(), format_number(it->eta).c_str());
    out << row;
  }
  return out.str();
}

void emit_report(const ExperimentResult& result, const std::filesystem::path& records_path,
                 const std::filesystem::path& table_path) {
  if (result.records.empty()) throw DataError("report: no run records");
  {
    std::ofstream out(records_path);
    if (!out) throw DataError("cannot write " + records_path.string());
    write_records(out, result.records);
    if (!out) throw DataError("write failed: " + records_path.string());
  }
  if (!table_path.empty()) {
    std::ofstream out(table_path);
    if (!out) throw DataError("cannot write " + table_path.string());
    out << format_table(result);
    if (!out) throw DataError("write failed: " + table_path.string());
  }
}

}  // namespace ssdl
