#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "treenc/error.hpp"
#include "treenc/problem.hpp"

namespace treenc {

inline constexpr std::string_view kAlgorithmLabels[] = {"mst",     "mst-loc-net", "mst-loc-sch", "ils-net",
                                                        "ils-sch", "ts-net",      "ts-sch",      "oracle"};

inline bool is_algorithm_label(std::string_view s) {
  return std::find(std::begin(kAlgorithmLabels), std::end(kAlgorithmLabels), s) != std::end(kAlgorithmLabels);
}

// One line of a results file.
struct RunRecord {
  std::string instance;
  Variant variant = Variant::kUSRT;
  std::string family;
  int n = 0;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::optional<Objective> objective;  // empty if the run did not complete
  long long wall_ms = 0;
  std::string params;
};

inline constexpr std::string_view kResultsHeader = "instance,variant,family,n,algorithm,seed,objective,wall_ms,params";

inline std::string to_csv_row(const RunRecord& r) {
  std::ostringstream out;
  out << r.instance << ',' << to_string(r.variant) << ',' << r.family << ',' << r.n << ',' << r.algorithm << ','
      << r.seed << ',';
  if (r.objective) out << *r.objective;
  out << ',' << r.wall_ms << ',' << r.params;
  return out.str();
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& where) {
  T value{};
  std::istringstream in(text);
  if (!(in >> value) || !in.eof()) throw SchemaError(where, "expected a number, got '" + text + "'");
  return value;
}

}  // namespace detail

inline RunRecord parse_csv_row(const std::string& line, std::size_t line_no) {
  const auto cells = detail::split_csv(line);
  const std::string where = "line " + std::to_string(line_no);
  if (cells.size() != 9) throw SchemaError(where, "expected 9 columns");
  RunRecord r;
  r.instance = cells[0];
  const auto variant = parse_variant(cells[1]);
  if (!variant) throw SchemaError(where + ".variant", "unknown variant '" + cells[1] + "'");
  r.variant = *variant;
  r.family = cells[2];
  r.n = detail::parse_number<int>(cells[3], where + ".n");
  if (!is_algorithm_label(cells[4])) throw SchemaError(where + ".algorithm", "unknown algorithm '" + cells[4] + "'");
  r.algorithm = cells[4];
  r.seed = detail::parse_number<std::uint64_t>(cells[5], where + ".seed");
  if (!cells[6].empty()) r.objective = detail::parse_number<Objective>(cells[6], where + ".objective");
  r.wall_ms = detail::parse_number<long long>(cells[7], where + ".wall_ms");
  r.params = cells[8];
  return r;
}

inline std::vector<RunRecord> read_results(std::istream& in) {
  std::vector<RunRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == kResultsHeader) continue;
    out.push_back(parse_csv_row(line, line_no));
  }
  return out;
}

inline std::vector<RunRecord> read_results_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_results(in);
}

// "instance,best" lines.
inline std::map<std::string, Objective> read_best_values(std::istream& in) {
  std::map<std::string, Objective> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line == "instance,best")) continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != 2) throw SchemaError("line " + std::to_string(line_no), "expected instance,best");
    out[cells[0]] = detail::parse_number<Objective>(cells[1], "line " + std::to_string(line_no) + ".best");
  }
  return out;
}

// Per (variant, family, n, algorithm) group: number of instances where the
// algorithm matched the best value, and average / maximum gap.
struct GroupRow {
  Variant variant = Variant::kUSRT;
  std::string family;
  int n = 0;
  std::string algorithm;
  int runs = 0;
  int num_best = 0;
  std::optional<double> avg_gap;
  std::optional<double> max_gap;
  int undefined_gaps = 0;
};

struct ReportInputs {
  std::vector<RunRecord> records;
  // Externally known best values, merged with the best over the records.
  std::map<std::string, Objective> best;
  // Smallest due date per instance; required for lateness variants.
  std::map<std::string, Objective> d_min;
};

inline std::vector<GroupRow> build_report(const ReportInputs& in) {
  std::map<std::string, Objective> best = in.best;
  std::vector<std::string> missing;
  for (const auto& r : in.records) {
    if (!r.objective) continue;
    auto it = best.find(r.instance);
    if (it == best.end() || *r.objective < it->second) best[r.instance] = *r.objective;
  }
  for (const auto& r : in.records) {
    if (!best.count(r.instance) && std::find(missing.begin(), missing.end(), r.instance) == missing.end()) {
      missing.push_back(r.instance);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw SchemaError("best", "no best value for: " + list);
  }

  using Key = std::tuple<int, std::string, int, std::string>;
  std::map<Key, GroupRow> groups;
  std::map<Key, double> sums;
  std::map<Key, int> defined;
  for (const auto& r : in.records) {
    if (!r.objective) continue;
    const Key key{static_cast<int>(r.variant), r.family, r.n, r.algorithm};
    GroupRow& row = groups[key];
    row.variant = r.variant;
    row.family = r.family;
    row.n = r.n;
    row.algorithm = r.algorithm;
    ++row.runs;
    const Objective b = best.at(r.instance);
    if (*r.objective == b) ++row.num_best;
    std::optional<Objective> d_min;
    if (is_lateness(r.variant)) {
      auto it = in.d_min.find(r.instance);
      if (it == in.d_min.end()) throw SchemaError("d_min", "no smallest due date for " + r.instance);
      d_min = it->second;
    }
    try {
      const double g = gap(*r.objective, b, d_min, r.variant).value();
      sums[key] += g;
      ++defined[key];
      row.max_gap = std::max(row.max_gap.value_or(g), g);
    } catch (const GapUndefinedError&) {
      ++row.undefined_gaps;
    }
  }
  std::vector<GroupRow> out;
  for (auto& [key, row] : groups) {
    if (defined[key] > 0) row.avg_gap = sums[key] / defined[key];
    out.push_back(row);
  }
  return out;
}

inline std::string format_gap(std::optional<double> g) {
  if (!g) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *g);
  return buf;
}

inline constexpr std::string_view kReportHeader = "variant,family,n,algorithm,runs,num_best,avg_gap,max_gap";

inline std::string render_report(const std::vector<GroupRow>& rows) {
  std::ostringstream out;
  out << kReportHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.variant) << ',' << r.family << ',' << r.n << ',' << r.algorithm << ',' << r.runs << ','
        << r.num_best << ',' << format_gap(r.avg_gap) << ',' << format_gap(r.max_gap) << '\n';
  }
  return out.str();
}

}  // namespace treenc
