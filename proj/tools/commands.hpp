#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fqm/serialize.hpp"

namespace fqm::cli {

/// Everything that determines a run. Written verbatim into every report.
struct RunConfig {
  std::string command;
  std::uint64_t q = 2;
  int p = 0;  ///< 0: taken from q
  int n = 3;
  int a = 1;
  int adot = 2;
  int m = 1;
  std::vector<std::string> places;
  std::string window;
  int nu = -1;  ///< -1: the value for omega = dt
  int precision = 0;  ///< 0: command default
  int samples = 1000;
  std::uint64_t seed = 1;
  std::vector<std::string> eq;
  std::vector<std::string> neq;
  std::string h = "0";
  long coef = 1;
  std::string mode;
  std::string recipe = "all";
  std::string pairing = "trace";
  std::string in;
  std::string out;
  std::string format = "json";
  std::uint64_t max_enum = kDefaultEnumCap;
  int timeout = 0;  ///< seconds, 0: none
};

Json to_json(const RunConfig& c);

/// Bad flags or input files.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// --max-enum or --timeout exceeded.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunResult {
  Json report;  ///< {tool, version, config, result, ok}
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  bool ok = false;
};

/// Runs one command. Throws UsageError, BudgetError or ParseError.
RunResult run_command(const RunConfig& config);

/// The report as written to --out: pretty JSON, or CSV with the config in
/// leading comment lines.
std::string render(const RunResult& r, const std::string& format);

/// "inf", a monic irreducible in t such as "t^2+t+1", or an integer c for
/// the place t - c. An optional ":k" suffix sets a multiplicity.
Place parse_place(const Field& f, const std::string& spec, int* multiplicity = nullptr);
/// "N,M"
Window parse_window(const std::string& spec);

}  // namespace fqm::cli
