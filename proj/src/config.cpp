#include "cpg/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "cpg/scenario.hpp"

namespace cpg {

ConfigError::ConfigError(const std::string& source, int line, int column, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                         what),
      line_(line),
      column_(column) {}

ScalarFn FnConfig::make() const {
  if (kind == "poly") return ScalarFn::polynomial(c);
  if (kind == "power_law") {
    if (c.size() != 3) throw std::invalid_argument("power_law takes [a, C, p]");
    return ScalarFn::power_law(c[0], c[1], c[2]);
  }
  throw std::invalid_argument("unknown function kind " + kind);
}

PairSpec PairConfig::make() const {
  PairSpec s;
  for (const auto& b : blocks) {
    if (b.type == "real") s.blocks.push_back(RealBlock{b.eps, b.rho});
    else if (b.type == "complex") s.blocks.push_back(ComplexBlock{b.crho});
    else if (b.type == "rho") s.blocks.push_back(RhoBlock{b.F.make()});
    else throw std::invalid_argument("unknown block type " + b.type);
  }
  s.lo = lo;
  s.hi = hi;
  s.margin = margin;
  return s;
}

std::vector<ConstantBlock> ScenarioConfig::constant_block_specs() const {
  std::vector<ConstantBlock> out;
  for (const auto& b : constant_blocks) out.push_back(ConstantBlock{b.c, b.dim, b.signature});
  return out;
}

const std::vector<std::string>& scenario_kinds() {
  static const std::vector<std::string> k = {"quotient-pair", "lift",   "main-example", "mobility2",
                                             "jordan",        "flows",  "appendix"};
  return k;
}

namespace {

// Sections each kind reads besides the common ones.
const std::map<std::string, std::set<std::string>>& kind_sections() {
  static const std::map<std::string, std::set<std::string>> m = {
      {"quotient-pair", {"pair"}},
      {"lift", {"pair", "constant_blocks", "window", "defect"}},
      {"main-example", {"pair", "constant_blocks", "window", "defect", "curve"}},
      {"mobility2", {"mobility", "constant_blocks", "window"}},
      {"jordan", {"jordan"}},
      {"flows", {"flows"}},
      {"appendix", {"appendix", "constant_blocks", "window"}}};
  return m;
}

const std::set<std::string> kCommon = {"name", "scenario", "grid", "tolerances", "checks", "outputs"};

class Parser {
 public:
  explicit Parser(std::string source) : src_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& n, const std::string& msg) const {
    const YAML::Mark m = n.Mark();
    throw ConfigError(src_, m.line + 1, m.column + 1, msg);
  }

  void keys(const YAML::Node& n, const std::string& where, const std::set<std::string>& allowed) const {
    if (!n.IsMap()) fail(n, where + ": expected a mapping");
    for (auto it = n.begin(); it != n.end(); ++it) {
      const std::string k = it->first.as<std::string>();
      if (!allowed.count(k)) fail(it->first, where + ": unknown key '" + k + "'");
    }
  }

  template <class T>
  T scalar(const YAML::Node& n, const std::string& what, const char* type) const {
    if (!n.IsScalar()) fail(n, what + ": expected " + type);
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, what + ": expected " + type + ", got '" + n.Scalar() + "'");
    }
  }
  double real(const YAML::Node& n, const std::string& what) const {
    return scalar<double>(n, what, "a number");
  }
  int integer(const YAML::Node& n, const std::string& what) const {
    return scalar<int>(n, what, "an integer");
  }
  bool boolean(const YAML::Node& n, const std::string& what) const {
    return scalar<bool>(n, what, "true or false");
  }
  std::string text(const YAML::Node& n, const std::string& what) const {
    return scalar<std::string>(n, what, "a string");
  }

  std::vector<double> reals(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence()) fail(n, what + ": expected a list of numbers");
    std::vector<double> v;
    for (const auto& e : n) v.push_back(real(e, what));
    return v;
  }
  std::vector<int> integers(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence()) fail(n, what + ": expected a list of integers");
    std::vector<int> v;
    for (const auto& e : n) v.push_back(integer(e, what));
    return v;
  }
  std::vector<std::string> texts(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence()) fail(n, what + ": expected a list of strings");
    std::vector<std::string> v;
    for (const auto& e : n) v.push_back(text(e, what));
    return v;
  }
  // [re, im] pairs or plain reals
  std::vector<std::complex<double>> complexes(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence()) fail(n, what + ": expected a list of complex numbers");
    std::vector<std::complex<double>> v;
    for (const auto& e : n) {
      if (e.IsScalar()) {
        v.emplace_back(real(e, what), 0.0);
      } else {
        const auto p = reals(e, what);
        if (p.size() != 2) fail(e, what + ": complex numbers are written [re, im]");
        v.emplace_back(p[0], p[1]);
      }
    }
    return v;
  }

  FnConfig fn(const YAML::Node& n, const std::string& what) const {
    keys(n, what, {"poly", "power_law"});
    if (n.size() != 1) fail(n, what + ": give exactly one of poly, power_law");
    FnConfig f;
    f.kind = n["poly"] ? "poly" : "power_law";
    f.c = reals(n[f.kind], what + "." + f.kind);
    if (f.kind == "poly" && f.c.empty()) fail(n, what + ": polynomial needs coefficients");
    if (f.kind == "power_law" && f.c.size() != 3) fail(n, what + ": power_law takes [a, C, p]");
    return f;
  }

  BlockConfig block(const YAML::Node& n) const {
    if (!n.IsMap() || !n["type"]) fail(n, "pair.blocks: each block needs a type");
    BlockConfig b;
    b.type = text(n["type"], "block type");
    if (b.type == "real") {
      keys(n, "real block", {"type", "eps", "rho"});
      if (n["eps"]) b.eps = integer(n["eps"], "eps");
      if (b.eps != 1 && b.eps != -1) fail(n["eps"], "eps must be 1 or -1");
      if (!n["rho"]) fail(n, "real block needs rho coefficients");
      b.rho = reals(n["rho"], "rho");
      if (b.rho.size() < 2) fail(n["rho"], "rho must be a non-constant polynomial");
    } else if (b.type == "complex") {
      keys(n, "complex block", {"type", "rho"});
      if (!n["rho"]) fail(n, "complex block needs rho coefficients");
      b.crho = complexes(n["rho"], "rho");
      if (b.crho.size() < 2) fail(n["rho"], "rho must be a non-constant polynomial");
    } else if (b.type == "rho") {
      keys(n, "rho block", {"type", "F"});
      if (!n["F"]) fail(n, "rho block needs F");
      b.F = fn(n["F"], "F");
    } else {
      fail(n["type"], "block type must be real, complex or rho");
    }
    return b;
  }

  ScenarioConfig parse(const std::string& text_in) const {
    YAML::Node root;
    try {
      root = YAML::Load(text_in);
    } catch (const YAML::ParserException& e) {
      throw ConfigError(src_, e.mark.line + 1, e.mark.column + 1, e.msg);
    }
    if (!root.IsMap()) throw ConfigError(src_, 1, 1, "config must be a mapping");
    ScenarioConfig c;
    if (!root["scenario"]) throw ConfigError(src_, 1, 1, "missing 'scenario'");
    c.kind = text(root["scenario"], "scenario");
    const auto ks = kind_sections().find(c.kind);
    if (ks == kind_sections().end()) fail(root["scenario"], "unknown scenario kind '" + c.kind + "'");
    std::set<std::string> allowed = kCommon;
    allowed.insert(ks->second.begin(), ks->second.end());
    for (auto it = root.begin(); it != root.end(); ++it) {
      const std::string k = it->first.as<std::string>();
      if (!allowed.count(k)) {
        bool known = false;
        for (const auto& [kind, secs] : kind_sections()) known = known || secs.count(k);
        fail(it->first, known ? "section '" + k + "' is not used by scenario kind '" + c.kind + "'"
                              : "unknown key '" + k + "'");
      }
    }
    if (root["name"]) c.name = text(root["name"], "name");

    if (const auto n = root["pair"]) {
      keys(n, "pair", {"blocks", "lo", "hi", "margin"});
      if (!n["blocks"] || !n["blocks"].IsSequence() || n["blocks"].size() == 0)
        fail(n, "pair needs a non-empty list of blocks");
      for (const auto& b : n["blocks"]) c.pair.blocks.push_back(block(b));
      if (!n["lo"] || !n["hi"]) fail(n, "pair needs lo and hi");
      c.pair.lo = reals(n["lo"], "pair.lo");
      c.pair.hi = reals(n["hi"], "pair.hi");
      if (n["margin"]) c.pair.margin = real(n["margin"], "pair.margin");
    } else if (ks->second.count("pair")) {
      throw ConfigError(src_, 1, 1, "scenario '" + c.kind + "' needs a pair section");
    }
    if (const auto n = root["constant_blocks"]) {
      if (!n.IsSequence()) fail(n, "constant_blocks: expected a list");
      for (const auto& e : n) {
        keys(e, "constant block", {"c", "dim", "signature"});
        ConstantBlockConfig b;
        if (!e["c"]) fail(e, "constant block needs c");
        b.c = real(e["c"], "c");
        if (e["dim"]) b.dim = integer(e["dim"], "dim");
        if (e["signature"]) b.signature = integers(e["signature"], "signature");
        c.constant_blocks.push_back(b);
      }
    }
    if (root["window"]) c.window = real(root["window"], "window");
    if (root["defect"]) c.defect = real(root["defect"], "defect");
    if (const auto n = root["mobility"]) {
      keys(n, "mobility", {"ell", "a", "C", "kahler", "rho_lo", "rho_hi", "t_range"});
      auto& m = c.mobility;
      if (n["ell"]) m.ell = integer(n["ell"], "ell");
      if (n["a"]) m.a = reals(n["a"], "a");
      if (n["C"]) m.C = real(n["C"], "C");
      if (n["kahler"]) m.kahler = boolean(n["kahler"], "kahler");
      if (n["rho_lo"]) m.rho_lo = reals(n["rho_lo"], "rho_lo");
      if (n["rho_hi"]) m.rho_hi = reals(n["rho_hi"], "rho_hi");
      if (n["t_range"]) {
        const auto t = reals(n["t_range"], "t_range");
        if (t.size() != 2) fail(n["t_range"], "t_range is [t_min, t_max]");
        m.t_min = t[0];
        m.t_max = t[1];
      }
    }
    if (const auto n = root["jordan"]) {
      keys(n, "jordan", {"size", "n2", "C", "rho0", "rho_range", "init", "a", "lo", "hi"});
      auto& j = c.jordan;
      if (n["size"]) j.size = integer(n["size"], "size");
      if (n["n2"]) j.n2 = integer(n["n2"], "n2");
      if (n["C"]) j.C = real(n["C"], "C");
      if (n["rho0"]) j.rho0 = real(n["rho0"], "rho0");
      if (n["rho_range"]) {
        const auto r = reals(n["rho_range"], "rho_range");
        if (r.size() != 2) fail(n["rho_range"], "rho_range is [lo, hi]");
        j.rho_lo = r[0];
        j.rho_hi = r[1];
      }
      if (n["init"]) j.init = reals(n["init"], "init");
      if (n["a"]) j.a = reals(n["a"], "a");
      if (n["lo"]) j.lo = reals(n["lo"], "lo");
      if (n["hi"]) j.hi = reals(n["hi"], "hi");
    }
    if (const auto n = root["curve"]) {
      keys(n, "curve", {"T", "samples", "velocity"});
      if (n["T"]) c.curve.T = real(n["T"], "T");
      if (n["samples"]) c.curve.samples = integer(n["samples"], "samples");
      if (n["velocity"]) c.curve.velocity = reals(n["velocity"], "velocity");
    }
    if (const auto n = root["flows"]) {
      keys(n, "flows", {"families", "starts", "T", "samples"});
      if (n["families"]) c.flows.families = texts(n["families"], "families");
      if (n["starts"]) c.flows.starts = complexes(n["starts"], "starts");
      if (n["T"]) c.flows.T = real(n["T"], "T");
      if (n["samples"]) c.flows.samples = integer(n["samples"], "samples");
    }
    if (const auto n = root["appendix"]) {
      keys(n, "appendix", {"B", "kahler", "rho_range", "F", "x", "delta"});
      auto& a = c.appendix;
      if (n["B"]) a.B = real(n["B"], "B");
      if (n["kahler"]) a.kahler = boolean(n["kahler"], "kahler");
      if (n["rho_range"]) {
        const auto r = reals(n["rho_range"], "rho_range");
        if (r.size() != 2) fail(n["rho_range"], "rho_range is [lo, hi]");
        a.rho_lo = r[0];
        a.rho_hi = r[1];
      }
      if (n["F"]) a.F = fn(n["F"], "F");
      if (n["x"]) a.x = real(n["x"], "x");
      if (n["delta"]) a.delta = real(n["delta"], "delta");
    }
    if (const auto n = root["grid"]) {
      keys(n, "grid", {"per_axis", "random", "seed"});
      if (n["per_axis"]) c.grid.per_axis = integer(n["per_axis"], "per_axis");
      if (n["random"]) c.grid.random = integer(n["random"], "random");
      if (n["seed"]) c.grid.seed = scalar<unsigned long long>(n["seed"], "seed", "a non-negative integer");
    }
    if (const auto n = root["checks"]) c.checks = texts(n, "checks");
    if (const auto n = root["outputs"]) {
      keys(n, "outputs", {"report", "csv"});
      if (n["report"]) c.outputs.report = text(n["report"], "outputs.report");
      if (n["csv"]) c.outputs.csv = text(n["csv"], "outputs.csv");
    }
    if (const auto n = root["tolerances"]) {
      keys(n, "tolerances", [&] {
        std::set<std::string> ids;
        for (const auto& ci : available_checks(c)) ids.insert(ci.id);
        return ids;
      }());
      for (auto it = n.begin(); it != n.end(); ++it) {
        const double t = real(it->second, "tolerance");
        if (!(t > 0)) fail(it->second, "tolerances must be positive");
        c.tolerances[it->first.as<std::string>()] = t;
      }
    }
    validate(root, c);
    return c;
  }

  void validate(const YAML::Node& root, const ScenarioConfig& c) const {
    auto at = [&](const char* key) { return root[key] ? root[key] : root; };
    auto guard = [&](const YAML::Node& n, const std::function<void()>& f) {
      try {
        f();
      } catch (const std::invalid_argument& e) {
        fail(n, e.what());
      }
    };
    if (c.grid.per_axis < 0 || c.grid.random < 0) fail(at("grid"), "grid counts must be non-negative");
    if (c.grid.per_axis == 0 && c.grid.random == 0) fail(at("grid"), "grid has no samples");
    const bool kahler_kind = c.kind == "lift" || c.kind == "main-example" ||
                             (c.kind == "mobility2" && c.mobility.kahler) ||
                             (c.kind == "appendix" && c.appendix.kahler);
    for (std::size_t i = 0; i < c.constant_blocks.size(); ++i) {
      const auto& b = c.constant_blocks[i];
      const YAML::Node n = root["constant_blocks"][i];
      if (b.dim <= 0) fail(n, "constant block dimension must be positive");
      if (kahler_kind && b.dim % 2) fail(n, "Kahler constant blocks have even real dimension");
      const int expect = kahler_kind ? b.dim / 2 : b.dim;
      if (!b.signature.empty() && static_cast<int>(b.signature.size()) != expect)
        fail(n, "signature needs " + std::to_string(expect) + " signs");
      for (int s : b.signature)
        if (s != 1 && s != -1) fail(n, "signature entries are 1 or -1");
    }
    if (!(c.window > 0)) fail(at("window"), "window must be positive");
    if (root["pair"]) {
      std::vector<double> cs;
      for (const auto& b : c.constant_blocks) cs.push_back(b.c);
      guard(root["pair"], [&] { QuotientPair(c.pair.make()).validate(cs); });
    }
    if (c.kind == "mobility2") {
      const auto& m = c.mobility;
      const YAML::Node n = at("mobility");
      if (m.ell < 1) fail(n, "mobility.ell must be at least 1");
      if (static_cast<int>(m.a.size()) != m.ell) fail(n, "mobility.a needs one weight per eigenvalue");
      if (static_cast<int>(m.rho_lo.size()) != m.ell || static_cast<int>(m.rho_hi.size()) != m.ell)
        fail(n, "mobility.rho_lo and rho_hi need one entry per eigenvalue");
      for (int i = 0; i < m.ell; ++i) {
        if (m.a[i] == 0.0) fail(n, "mobility.a entries must be nonzero");
        if (!(0.0 < m.rho_lo[i] && m.rho_lo[i] < m.rho_hi[i] && m.rho_hi[i] < 1.0))
          fail(n, "eigenvalue windows must lie inside (0, 1)");
        if (i > 0 && !(m.rho_hi[i - 1] < m.rho_lo[i])) fail(n, "eigenvalue windows must be ordered");
      }
      if (!(m.t_min < 0.0 && 0.0 < m.t_max)) fail(n, "t_range must contain 0");
    }
    if (c.kind == "jordan") {
      const auto& j = c.jordan;
      const YAML::Node n = at("jordan");
      if (j.size != 2 && j.size != 3) fail(n, "jordan.size must be 2 or 3");
      if (j.n2 < 0) fail(n, "jordan.n2 must be non-negative");
      if (static_cast<int>(j.init.size()) != j.size)
        fail(n, "jordan.init gives F, G1" + std::string(j.size == 3 ? ", H1" : "") + " at rho0");
      if (!(0.0 < j.rho_lo && j.rho_lo < j.rho0 && j.rho0 < j.rho_hi && j.rho_hi < 1.0))
        fail(n, "need 0 < rho_lo < rho0 < rho_hi < 1");
      if (!j.a.empty() && static_cast<int>(j.a.size()) != j.n2)
        fail(n, "jordan.a gives one weight per glued eigenvalue (n2 of them)");
      const std::size_t dim = j.size + j.a.size();
      if (j.lo.size() != dim || j.hi.size() != dim)
        fail(n, "jordan.lo and hi need " + std::to_string(dim) + " entries");
      for (std::size_t a = 0; a < dim; ++a)
        if (!(j.lo[a] < j.hi[a])) fail(n, "jordan window must have lo < hi");
      const double rlo = j.lo[j.size - 1], rhi = j.hi[j.size - 1];
      if (rlo < j.rho_lo || rhi > j.rho_hi) fail(n, "the block eigenvalue window must lie in rho_range");
    }
    if (c.kind == "main-example") {
      if (!(c.curve.T > 0) || c.curve.samples < 2) fail(at("curve"), "curve needs T > 0 and samples >= 2");
    }
    if (c.kind == "flows") {
      const YAML::Node n = at("flows");
      for (const auto& f : c.flows.families)
        if (f != "elliptic" && f != "logistic" && f != "parabolic")
          fail(n, "flow families are elliptic, logistic, parabolic");
      if (c.flows.families.empty()) fail(n, "flows needs at least one family");
      if (c.flows.T == 0.0 || c.flows.samples < 3) fail(n, "flows needs T != 0 and samples >= 3");
    }
    if (c.kind == "appendix") {
      const auto& a = c.appendix;
      const YAML::Node n = at("appendix");
      if (a.B == 0.0) fail(n, "appendix.B must be nonzero");
      if (!(0.0 < a.rho_lo && a.rho_lo < a.rho_hi && a.rho_hi < 1.0))
        fail(n, "appendix.rho_range must lie inside (0, 1)");
      if (!(a.delta > 0)) fail(n, "appendix.delta must be positive");
    }
    std::set<std::string> ids;
    for (const auto& ci : available_checks(c)) ids.insert(ci.id);
    for (std::size_t i = 0; i < c.checks.size(); ++i)
      if (!ids.count(c.checks[i]))
        fail(root["checks"][i], "check '" + c.checks[i] + "' is not available for scenario '" + c.kind + "'");
  }

 private:
  std::string src_;
};

void emit_fn(YAML::Emitter& e, const FnConfig& f) {
  e << YAML::Flow << YAML::BeginMap << YAML::Key << f.kind << YAML::Value << YAML::Flow << f.c
    << YAML::EndMap;
}

void emit_complexes(YAML::Emitter& e, const std::vector<std::complex<double>>& z) {
  e << YAML::Flow << YAML::BeginSeq;
  for (const auto& x : z) e << YAML::Flow << YAML::BeginSeq << x.real() << x.imag() << YAML::EndSeq;
  e << YAML::EndSeq;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
  return Parser(source).parse(text);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, 0, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string serialize_config(const ScenarioConfig& c) {
  const auto& secs = kind_sections().at(c.kind);
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  if (!c.name.empty()) e << YAML::Key << "name" << YAML::Value << c.name;
  e << YAML::Key << "scenario" << YAML::Value << c.kind;
  if (secs.count("pair")) {
    e << YAML::Key << "pair" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "blocks" << YAML::Value << YAML::BeginSeq;
    for (const auto& b : c.pair.blocks) {
      e << YAML::Flow << YAML::BeginMap << YAML::Key << "type" << YAML::Value << b.type;
      if (b.type == "real") {
        e << YAML::Key << "eps" << YAML::Value << b.eps;
        e << YAML::Key << "rho" << YAML::Value << YAML::Flow << b.rho;
      } else if (b.type == "complex") {
        e << YAML::Key << "rho" << YAML::Value;
        emit_complexes(e, b.crho);
      } else {
        e << YAML::Key << "F" << YAML::Value;
        emit_fn(e, b.F);
      }
      e << YAML::EndMap;
    }
    e << YAML::EndSeq;
    e << YAML::Key << "lo" << YAML::Value << YAML::Flow << c.pair.lo;
    e << YAML::Key << "hi" << YAML::Value << YAML::Flow << c.pair.hi;
    e << YAML::Key << "margin" << YAML::Value << c.pair.margin;
    e << YAML::EndMap;
  }
  if (secs.count("constant_blocks") && !c.constant_blocks.empty()) {
    e << YAML::Key << "constant_blocks" << YAML::Value << YAML::BeginSeq;
    for (const auto& b : c.constant_blocks) {
      e << YAML::Flow << YAML::BeginMap << YAML::Key << "c" << YAML::Value << b.c << YAML::Key
        << "dim" << YAML::Value << b.dim;
      if (!b.signature.empty()) e << YAML::Key << "signature" << YAML::Value << YAML::Flow << b.signature;
      e << YAML::EndMap;
    }
    e << YAML::EndSeq;
  }
  if (secs.count("window")) e << YAML::Key << "window" << YAML::Value << c.window;
  if (secs.count("defect") && c.defect != 0.0) e << YAML::Key << "defect" << YAML::Value << c.defect;
  if (secs.count("mobility")) {
    const auto& m = c.mobility;
    e << YAML::Key << "mobility" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "ell" << YAML::Value << m.ell;
    e << YAML::Key << "a" << YAML::Value << YAML::Flow << m.a;
    e << YAML::Key << "C" << YAML::Value << m.C;
    e << YAML::Key << "kahler" << YAML::Value << m.kahler;
    e << YAML::Key << "rho_lo" << YAML::Value << YAML::Flow << m.rho_lo;
    e << YAML::Key << "rho_hi" << YAML::Value << YAML::Flow << m.rho_hi;
    e << YAML::Key << "t_range" << YAML::Value << YAML::Flow << std::vector<double>{m.t_min, m.t_max};
    e << YAML::EndMap;
  }
  if (secs.count("jordan")) {
    const auto& j = c.jordan;
    e << YAML::Key << "jordan" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "size" << YAML::Value << j.size;
    e << YAML::Key << "n2" << YAML::Value << j.n2;
    e << YAML::Key << "C" << YAML::Value << j.C;
    e << YAML::Key << "rho0" << YAML::Value << j.rho0;
    e << YAML::Key << "rho_range" << YAML::Value << YAML::Flow << std::vector<double>{j.rho_lo, j.rho_hi};
    e << YAML::Key << "init" << YAML::Value << YAML::Flow << j.init;
    e << YAML::Key << "a" << YAML::Value << YAML::Flow << j.a;
    e << YAML::Key << "lo" << YAML::Value << YAML::Flow << j.lo;
    e << YAML::Key << "hi" << YAML::Value << YAML::Flow << j.hi;
    e << YAML::EndMap;
  }
  if (secs.count("curve")) {
    e << YAML::Key << "curve" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "T" << YAML::Value << c.curve.T;
    e << YAML::Key << "samples" << YAML::Value << c.curve.samples;
    e << YAML::Key << "velocity" << YAML::Value << YAML::Flow << c.curve.velocity;
    e << YAML::EndMap;
  }
  if (secs.count("flows")) {
    e << YAML::Key << "flows" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "families" << YAML::Value << YAML::Flow << c.flows.families;
    e << YAML::Key << "starts" << YAML::Value;
    emit_complexes(e, c.flows.starts);
    e << YAML::Key << "T" << YAML::Value << c.flows.T;
    e << YAML::Key << "samples" << YAML::Value << c.flows.samples;
    e << YAML::EndMap;
  }
  if (secs.count("appendix")) {
    const auto& a = c.appendix;
    e << YAML::Key << "appendix" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "B" << YAML::Value << a.B;
    e << YAML::Key << "kahler" << YAML::Value << a.kahler;
    e << YAML::Key << "rho_range" << YAML::Value << YAML::Flow << std::vector<double>{a.rho_lo, a.rho_hi};
    e << YAML::Key << "F" << YAML::Value;
    emit_fn(e, a.F);
    e << YAML::Key << "x" << YAML::Value << a.x;
    e << YAML::Key << "delta" << YAML::Value << a.delta;
    e << YAML::EndMap;
  }
  e << YAML::Key << "grid" << YAML::Value << YAML::Flow << YAML::BeginMap;
  e << YAML::Key << "per_axis" << YAML::Value << c.grid.per_axis;
  e << YAML::Key << "random" << YAML::Value << c.grid.random;
  e << YAML::Key << "seed" << YAML::Value << c.grid.seed;
  e << YAML::EndMap;
  if (!c.tolerances.empty()) {
    e << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : c.tolerances) e << YAML::Key << k << YAML::Value << v;
    e << YAML::EndMap;
  }
  if (!c.checks.empty()) e << YAML::Key << "checks" << YAML::Value << YAML::Flow << c.checks;
  if (!c.outputs.report.empty() || !c.outputs.csv.empty()) {
    e << YAML::Key << "outputs" << YAML::Value << YAML::BeginMap;
    if (!c.outputs.report.empty()) e << YAML::Key << "report" << YAML::Value << c.outputs.report;
    if (!c.outputs.csv.empty()) e << YAML::Key << "csv" << YAML::Value << c.outputs.csv;
    e << YAML::EndMap;
  }
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace cpg
