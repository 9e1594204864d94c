#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpg/config.hpp"
#include "cpg/report.hpp"

namespace cpg {

struct CheckInfo {
  std::string id;
  std::string description;
  double tol = 1e-6;  // default tolerance
};
// Checks a scenario offers, in run order.
std::vector<CheckInfo> available_checks(const ScenarioConfig& c);
std::vector<CheckInfo> available_checks(const std::string& kind);

struct RunOptions {
  std::optional<int> grid;  // overrides grid.per_axis
  std::optional<unsigned long long> seed;
  double tol_scale = 1.0;
  std::string csv_dir;            // overrides outputs.csv
  std::vector<std::string> only;  // restricts the checks
};

struct RunResult {
  ScenarioConfig effective;         // config after flag overrides
  std::vector<std::string> checks;  // check ids run, in order
  ResidualReport report;
  std::vector<std::string> notes;
  std::vector<std::string> csv_files;  // relative to the CSV directory
};

// Builds the scenario instance and runs the selected checks. Failures of a
// check (including exceptions thrown while checking) become failing entries.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options);

// Deterministic JSON report: scenario, checks, entries, overall pass, provenance.
std::string report_json(const RunResult& r);

// Writes a CSV with a header row and 17 significant digits per value.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string version_string();

}  // namespace cpg
