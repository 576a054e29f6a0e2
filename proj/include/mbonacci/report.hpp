#pragma once

// Command orchestration behind the CLI: each cmd_* runs a bounded computation
// and returns a ReportBundle that renders to csv, json or markdown.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace mbonacci {

inline constexpr const char* kToolVersion = "1.0.0";

enum class OutputFormat { csv, json, md };

OutputFormat parse_format(std::string_view text);
std::string to_string(OutputFormat f);

struct RunConfig {
  std::string command;
  int m_lo = 4;
  int m_hi = 4;
  /// Empty selects every letter.
  std::vector<int> letters;
  OutputFormat format = OutputFormat::csv;
  /// Empty writes to stdout.
  std::string out;
  /// 0 selects the command default.
  std::size_t prefix_len = 0;
  /// Empty selects the command default.
  std::vector<std::size_t> lengths;
  /// Width target for the quadrature of A.
  mpq_class tol{1, 1000};
  /// Width target for conjugate-root enclosures.
  mpq_class root_tol;
  /// Initial width 2^{-bits} of the beta enclosure.
  long beta_bits = 100;
  /// Negative tests for verify-all: "" or "t-seed".
  std::string inject_fault;

  RunConfig();
  /// Throws ConfigError on empty ranges or nonpositive precision targets.
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  bool in_csv = true;
  bool in_md = true;
};

struct TaskResult {
  std::string name;
  bool passed = true;
  bool precision_failure = false;
  std::string detail;
};

struct ReportBundle {
  std::string tool_version = kToolVersion;
  std::string command;
  nlohmann::ordered_json config;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<TaskResult> tasks;
  std::vector<Table> tables;
  /// Wall-clock seconds per phase; reported on stderr, never serialized.
  std::vector<std::pair<std::string, double>> timing;

  bool passed() const;
  bool precision_failure() const;
  nlohmann::ordered_json to_json() const;
};

std::string render_csv(const ReportBundle& b);
std::string render_json(const ReportBundle& b);
std::string render_markdown(const ReportBundle& b);
std::string render(const ReportBundle& b, OutputFormat f);

/// 0 when every task passed, 3 on a precision failure, 1 otherwise.
int exit_code(const ReportBundle& b);

ReportBundle cmd_bounds(const RunConfig& config);
ReportBundle cmd_table12(const RunConfig& config);
ReportBundle cmd_brute(const RunConfig& config);
ReportBundle cmd_roots(const RunConfig& config);
ReportBundle cmd_global(const RunConfig& config);
ReportBundle cmd_witness(const RunConfig& config);
ReportBundle cmd_verify_all(const RunConfig& config);
/// Dispatches on config.command; throws ConfigError for unknown commands.
ReportBundle run_command(const RunConfig& config);

/// Bounds grid recovered from the markdown rendering: row m maps to the cells
/// a = 0 .. columns-1, nullopt for the padding cells a >= m.
using BoundsGrid = std::map<int, std::vector<std::optional<long>>>;
BoundsGrid parse_bounds_markdown(std::string_view text);

}  // namespace mbonacci
