#ifndef SAGUIN_CSV_HPP
#define SAGUIN_CSV_HPP

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "saguin/error.hpp"
#include "saguin/experiment_config.hpp"
#include "saguin/key_value.hpp"
#include "saguin/version.hpp"

namespace saguin {

struct ResultTable {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> rejected;  // "<point>: <reason>"
};

inline constexpr std::string_view config_begin_marker = "# --- resolved config ---";
inline constexpr std::string_view config_end_marker = "# --- end config ---";

/// Header comment block (version, experiment, resolved config), column
/// line, rows, then one "# rejected:" line per rejected sweep point.
inline void write_csv(std::ostream& out, const ResultTable& table, const ExperimentConfig& cfg) {
  out << fmt::format("# saguin {}\n", version);
  out << fmt::format("# experiment = {}\n", table.experiment);
  out << config_begin_marker << '\n';
  for (const auto& [k, v] : resolved_entries(cfg)) out << fmt::format("# {} = {}\n", k, v);
  out << config_end_marker << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  for (const auto& r : table.rejected) out << "# rejected: " << r << '\n';
}

inline void write_csv(const std::filesystem::path& path, const ResultTable& table,
                      const ExperimentConfig& cfg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  write_csv(out, table, cfg);
  if (!out) throw ConfigError(fmt::format("write to '{}' failed", path.string()));
}

struct CsvHeader {
  std::string experiment;
  kv::Entries config;
};

/// Reads back the header block written by write_csv.
inline CsvHeader read_csv_header(std::istream& in) {
  CsvHeader h;
  std::string line;
  std::ostringstream block;
  bool inside = false;
  bool closed = false;
  while (std::getline(in, line)) {
    if (line.rfind("# experiment = ", 0) == 0 && !inside) {
      h.experiment = line.substr(15);
    } else if (line == config_begin_marker) {
      inside = true;
    } else if (line == config_end_marker) {
      closed = inside;
      break;
    } else if (inside) {
      if (line.rfind("# ", 0) != 0) throw ConfigError("malformed config line in CSV header");
      block << line.substr(2) << '\n';
    }
  }
  if (!closed) throw ConfigError("CSV has no embedded config block");
  std::istringstream entries(block.str());
  h.config = kv::parse(entries, "<csv header>");
  return h;
}

inline CsvHeader read_csv_header(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  return read_csv_header(in);
}

/// Loads a key-value config, or the config embedded in a CSV written by
/// write_csv, so any result file can regenerate itself.
inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  std::string first;
  std::getline(in, first);
  if (first.rfind("# saguin ", 0) != 0) return load_config(path);
  in.seekg(0);
  return apply_entries(ExperimentConfig{}, read_csv_header(in).config);
}

}  // namespace saguin

#endif  // SAGUIN_CSV_HPP
