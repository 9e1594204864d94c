#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "cpg/scenario.hpp"

namespace {

std::vector<std::string> split_list(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const auto& s : in) {
    std::size_t a = 0;
    while (a <= s.size()) {
      const std::size_t b = std::min(s.find(',', a), s.size());
      if (b > a) out.push_back(s.substr(a, b - a));
      a = b + 1;
    }
  }
  return out;
}

void list_checks(const std::vector<cpg::CheckInfo>& checks) {
  for (const auto& c : checks) std::cout << fmt::format("  {:<12} {:<8.0e} {}\n", c.id, c.tol, c.description);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run a scenario config and report residuals of every selected check"};
  std::string config, report_path;
  int grid = -1;
  unsigned long long seed = 0;
  double tol_scale = 1.0;
  std::string csv_dir;
  std::vector<std::string> only;
  bool list = false, quiet = false;
  int workers = 0;
  app.add_option("config", config, "scenario config (YAML)");
  auto* grid_opt = app.add_option("--grid", grid, "grid points per axis")->check(CLI::NonNegativeNumber);
  auto* seed_opt = app.add_option("--seed", seed, "seed of the random samples");
  app.add_option("--tol-scale", tol_scale, "multiply every tolerance")->check(CLI::PositiveNumber);
  app.add_option("--csv", csv_dir, "directory for CSV data");
  app.add_option("--only", only, "run only these checks (comma separated)");
  app.add_flag("--list-checks", list, "list the checks of the scenario (or of every kind)");
  app.add_option("--report", report_path, "write the JSON report here (default: outputs.report)");
  app.add_option("--workers", workers, "worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
  app.add_flag("-q,--quiet", quiet, "print only the overall verdict");
  CLI11_PARSE(app, argc, argv);

  cpg::set_worker_count(workers);
  try {
    if (list && config.empty()) {
      for (const auto& k : cpg::scenario_kinds()) {
        std::cout << k << ":\n";
        list_checks(cpg::available_checks(k));
      }
      return 0;
    }
    if (config.empty()) {
      std::cerr << "a config file is required\n" << app.help();
      return 2;
    }
    const cpg::ScenarioConfig cfg = cpg::load_config(config);
    if (list) {
      std::cout << cfg.kind << ":\n";
      list_checks(cpg::available_checks(cfg));
      return 0;
    }
    cpg::RunOptions opt;
    if (*grid_opt) opt.grid = grid;
    if (*seed_opt) opt.seed = seed;
    opt.tol_scale = tol_scale;
    opt.csv_dir = csv_dir;
    opt.only = split_list(only);
    const cpg::RunResult r = cpg::run_scenario(cfg, opt);
    const std::string json = cpg::report_json(r);
    const std::string out = report_path.empty() ? cfg.outputs.report : report_path;
    if (!out.empty()) {
      std::ofstream f(out);
      if (!f) throw std::runtime_error("cannot write " + out);
      f << json;
    }
    const bool pass = r.report.pass() && !r.report.entries.empty();
    if (!quiet) {
      for (const auto& e : r.report.entries)
        std::cout << fmt::format("{:<4} {:<40} {:>11.3e} <= {:<9.2e} n={} excl={}{}\n",
                                 e.pass ? "ok" : "FAIL", e.name, e.residual, e.tol, e.samples,
                                 e.excluded, e.note.empty() ? "" : "  " + e.note);
      for (const auto& n : r.notes) std::cout << "note: " << n << "\n";
    }
    std::cout << fmt::format("{}: {} ({} checks, {} entries)\n", cfg.name.empty() ? config : cfg.name,
                             pass ? "PASS" : "FAIL", r.checks.size(), r.report.entries.size());
    return pass ? 0 : 1;
  } catch (const cpg::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
