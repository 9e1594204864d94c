#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpg/builders.hpp"

namespace cpg {

// Parse or validation failure anchored at a line and column of the config text.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

// Function of one variable: "poly" with coefficients lowest degree first, or
// "power_law" with (a, C, p) meaning a (1 - t)^(-C) t^p.
struct FnConfig {
  std::string kind = "poly";
  std::vector<double> c;
  ScalarFn make() const;
  bool operator==(const FnConfig&) const = default;
};

// One block of a compatible pair: real {eps, rho}, complex {rho}, rho {F}, jordan {size, F}.
struct BlockConfig {
  std::string type = "real";
  int eps = 1;
  std::vector<double> rho;
  std::vector<std::complex<double>> crho;
  FnConfig F;
  int size = 2;
  bool operator==(const BlockConfig&) const = default;
};

struct PairConfig {
  std::vector<BlockConfig> blocks;
  std::vector<double> lo, hi;
  double margin = 0.05;
  PairSpec make() const;
  bool operator==(const PairConfig&) const = default;
};

struct ConstantBlockConfig {
  double c = 0.0;
  int dim = 2;
  std::vector<int> signature;
  bool operator==(const ConstantBlockConfig&) const = default;
};

struct MobilityConfig {
  int ell = 1;
  std::vector<double> a{1.0};
  double C = -0.5;
  bool kahler = true;
  std::vector<double> rho_lo{0.2}, rho_hi{0.8};
  double t_min = -3.0, t_max = 3.0;
  bool operator==(const MobilityConfig&) const = default;
};

struct JordanConfig {
  int size = 2;
  int n2 = 1;
  double C = -0.5;
  double rho0 = 0.5;
  double rho_lo = 0.2, rho_hi = 0.8;
  std::vector<double> init{1.0, 0.3};
  std::vector<double> a;       // weights of glued real eigenvalues (n2 of them, or none)
  std::vector<double> lo, hi;  // chart window: x[, x2], rho_1[, rho_2, ...]
  bool operator==(const JordanConfig&) const = default;
};

struct CurveConfig {
  double T = 1.0;
  int samples = 101;
  std::vector<double> velocity;  // empty: a fixed generic direction
  bool operator==(const CurveConfig&) const = default;
};

struct FlowsConfig {
  std::vector<std::string> families{"elliptic", "logistic", "parabolic"};
  std::vector<std::complex<double>> starts;
  double T = 4.0;
  int samples = 201;
  bool operator==(const FlowsConfig&) const = default;
};

struct AppendixConfig {
  double B = 0.7;
  bool kahler = true;
  double rho_lo = 0.2, rho_hi = 0.8;
  FnConfig F{"poly", {0.1, -0.4, 0.3, 1.0, 0.5}};  // function for the lambda limit
  double x = 0.5, delta = 1e-2;
  bool operator==(const AppendixConfig&) const = default;
};

struct GridConfig {
  int per_axis = 3;
  int random = 16;
  unsigned long long seed = 1;
  bool operator==(const GridConfig&) const = default;
};

struct OutputConfig {
  std::string report;  // empty: report on stdout only
  std::string csv;     // empty: no CSV
  bool operator==(const OutputConfig&) const = default;
};

struct ScenarioConfig {
  std::string name;
  std::string kind;  // quotient-pair | lift | main-example | mobility2 | jordan | flows | appendix
  PairConfig pair;
  std::vector<ConstantBlockConfig> constant_blocks;
  double window = 0.5;
  double defect = 0.0;  // conformal factor 1 + defect x_0^2 seeded into g and omega
  MobilityConfig mobility;
  JordanConfig jordan;
  CurveConfig curve;
  FlowsConfig flows;
  AppendixConfig appendix;
  GridConfig grid;
  std::map<std::string, double> tolerances;  // per check
  std::vector<std::string> checks;           // empty: every check of the kind
  OutputConfig outputs;
  bool operator==(const ScenarioConfig&) const = default;

  std::vector<ConstantBlock> constant_block_specs() const;
};

const std::vector<std::string>& scenario_kinds();

// Parses and validates; `source` names the text in error messages.
ScenarioConfig parse_config(const std::string& text, const std::string& source = "<config>");
ScenarioConfig load_config(const std::string& path);
// Canonical text: parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& c);

}  // namespace cpg
