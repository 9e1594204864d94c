#include "cpg/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "cpg/curvspec.hpp"
#include "cpg/flows.hpp"
#include "cpg/kahler.hpp"
#include "cpg/killing.hpp"
#include "cpg/vandermonde.hpp"

#ifndef CPG_VERSION
#define CPG_VERSION "0.0.0"
#endif

namespace cpg {

std::string version_string() { return CPG_VERSION; }

namespace {

const std::map<std::string, CheckInfo>& check_table() {
  static const std::map<std::string, CheckInfo> t = [] {
    std::map<std::string, CheckInfo> m;
    for (const CheckInfo& c : std::initializer_list<CheckInfo>{
             {"kahler", "J^2 = -Id, g hermitian, omega = g(J.,.), d omega = 0, nabla J = 0", 1e-6},
             {"cproj", "A hermitian and c-compatible with g", 1e-6},
             {"proj", "L selfadjoint and projectively compatible with h", 1e-6},
             {"hamiltonian", "J grad det_C A is Killing", 1e-6},
             {"partner", "partner metric connection differs by the c-projective change", 1e-6},
             {"killing", "canonical Killing field statements", 1e-6},
             {"recurrence", "A K_i = mu_i K_1 - K_(i+1)", 1e-7},
             {"geodesic", "eigenvalue gradients span a totally geodesic distribution", 1e-6},
             {"duality", "commuting gradients and the reciprocal-eigenvalue identity", 1e-7},
             {"ricci", "Ricci identity for the curvature operator", 1e-6},
             {"spectrum", "closed-form curvature eigenvalues against the numeric spectrum", 1e-5},
             {"planarity", "geodesics of g are J-planar for the partner metric", 1e-5},
             {"lie", "canonical Lie-derivative equations of the vector field", 1e-6},
             {"volume", "volume coefficient of the leaves", 1e-5},
             {"transport", "eigenvalue follows the logistic law along the field", 1e-6},
             {"ode", "Jordan block ODE residuals, G1 constancy, scalar closed form", 1e-9},
             {"split", "split block Lie-derivative equations", 1e-6},
             {"alpha", "Jordan block invariant independent of the canonical basis", 1e-10},
             {"blowup", "curvature eigenvalue diverges like (F + x)^-3 (size 2), (F + 2 x2)^-2 (size 3)", 0.1},
             {"phase", "eigenvalue ODE fixed points, closed forms and circle trajectories", 1e-6},
             {"third_order", "third-order equation for tr L", 1e-6},
             {"fppp", "lambda tends to F'''/24 at collisions", 1e-3},
             {"cubic", "F = t^3 gives lambda = 1/4", 1e-8},
             {"vandermonde", "sum over Delta equals the determinant quotient", 1e-11},
             {"window", "admissible C window endpoints -2 and 1 - l", 0.05},
             {"corners", "lambda diverges or stays bounded at the corners", 1e-3}})
      m.emplace(c.id, c);
    return m;
  }();
  return t;
}

std::vector<std::string> check_ids(const std::string& kind, bool kahler, bool glued) {
  if (kind == "quotient-pair") return {"proj", "duality", "ricci", "spectrum"};
  if (kind == "lift")
    return {"kahler", "cproj", "hamiltonian", "partner", "killing", "recurrence", "geodesic", "ricci",
            "spectrum"};
  if (kind == "main-example")
    return {"kahler",     "cproj",    "hamiltonian", "partner",  "killing",
            "recurrence", "geodesic", "ricci",       "spectrum", "planarity"};
  if (kind == "mobility2") {
    if (kahler) return {"kahler", "cproj", "lie", "volume", "transport", "ricci"};
    return {"proj", "lie", "volume", "transport", "ricci"};
  }
  if (kind == "jordan") {
    std::vector<std::string> v = {"ode", "split", "proj"};
    if (glued) v.push_back("lie");
    for (const char* s : {"ricci", "spectrum", "alpha", "blowup"}) v.push_back(s);
    return v;
  }
  if (kind == "flows") return {"phase"};
  if (kind == "appendix") {
    std::vector<std::string> v = {"ricci", "spectrum"};
    if (!kahler) v.push_back("third_order");
    for (const char* s : {"fppp", "cubic", "vandermonde", "window", "corners"}) v.push_back(s);
    return v;
  }
  throw std::invalid_argument("unknown scenario kind " + kind);
}

std::vector<CheckInfo> infos(const std::vector<std::string>& ids) {
  std::vector<CheckInfo> out;
  for (const auto& id : ids) out.push_back(check_table().at(id));
  return out;
}

CheckEntry entry(const std::string& name, const std::string& anchor, double residual, double tol,
                 int samples = 1, int excluded = 0) {
  CheckEntry e;
  e.name = name;
  e.anchor = anchor;
  e.residual = std::isnan(residual) ? INFINITY : residual;
  e.tol = tol;
  e.samples = samples;
  e.excluded = excluded;
  e.pass = samples > 0 ? e.residual <= tol : true;
  if (samples == 0) e.note = "vacuous: no applicable samples";
  return e;
}

CheckEntry flag(const std::string& name, const std::string& anchor, bool ok) {
  CheckEntry e = entry(name, anchor, ok ? 0.0 : 1.0, 0.5);
  return e;
}

ResidualReport error_report(const std::string& id, const std::string& what) {
  ResidualReport r;
  CheckEntry e = entry(id + ".error", "check completed without an exception", INFINITY, 0.0);
  e.note = what;
  r.add(e);
  return r;
}

ResidualReport guarded(const std::string& id, const std::function<ResidualReport()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return error_report(id, e.what());
  }
}

Chart with_defect(Chart c, double eps) {
  auto base = c.eval;
  c.name += "-defect";
  c.eval = [base, eps](const std::vector<double>& x, int order) {
    Fields f = base(x, order);
    const JVec q = seeds(x, order);
    const Jet phi = 1.0 + eps * q[0] * q[0];
    f.g = f.g * phi;
    if (!f.omega.empty()) f.omega = f.omega * phi;
    return f;
  };
  c.notes.push_back("conformal defect 1 + " + fmt::format("{:g}", eps) + " x0^2 seeded into g and omega");
  return c;
}

std::vector<double> midpoint(const Chart& c) {
  std::vector<double> x(c.dim);
  for (int a = 0; a < c.dim; ++a) x[a] = 0.5 * (c.lo[a] + c.hi[a]);
  return x;
}

// Chart checks that run sample by sample.
using ChartCheck = std::function<ResidualReport(SampleBatch&, double)>;

struct Instance {
  Chart chart;
  std::optional<Chart> block;  // Jordan block alone
  std::optional<JordanOdeSolution> ode;
  Mobility2 mobility;
};

class Runner {
 public:
  Runner(const ScenarioConfig& c, const RunOptions& o, RunResult& r) : cfg_(c), opt_(o), res_(r) {}

  double tol(const std::string& id) const {
    auto it = cfg_.tolerances.find(id);
    const double t = it != cfg_.tolerances.end() ? it->second : check_table().at(id).tol;
    return t * opt_.tol_scale;
  }

  void csv(const std::string& file, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows) {
    if (csv_dir_.empty()) return;
    write_csv((std::filesystem::path(csv_dir_) / file).string(), header, rows);
    res_.csv_files.push_back(file);
  }

  void run() {
    csv_dir_ = opt_.csv_dir.empty() ? cfg_.outputs.csv : opt_.csv_dir;
    if (!csv_dir_.empty()) std::filesystem::create_directories(csv_dir_);
    const std::string& k = cfg_.kind;
    if (k == "flows") return run_flows();
    Instance inst;
    try {
      inst = build();
    } catch (const std::exception& e) {
      res_.report.append(error_report("build", e.what()));
      return;
    }
    for (const auto& n : inst.chart.notes) res_.notes.push_back(n);
    run_chart_checks(inst);
    if (k == "main-example" && selected("planarity")) run_planarity(inst.chart);
    if (k == "mobility2") {
      if (selected("transport")) run_transport(inst.chart);
    }
    if (k == "jordan") run_jordan(inst);
    if (k == "appendix") run_appendix();
  }

 private:
  bool selected(const std::string& id) const {
    return std::find(res_.checks.begin(), res_.checks.end(), id) != res_.checks.end();
  }

  Instance build() {
    Instance in;
    const auto cb = cfg_.constant_block_specs();
    const std::string& k = cfg_.kind;
    if (k == "quotient-pair") {
      in.chart = build_quotient_pair(cfg_.pair.make());
    } else if (k == "lift") {
      in.chart = cb.empty() ? lift_nonconstant(cfg_.pair.make())
                            : lift_with_constant_block(cfg_.pair.make(), cb, cfg_.window);
    } else if (k == "main-example") {
      in.chart = build_main_example(cfg_.pair.make(), cb, cfg_.window);
    } else if (k == "mobility2") {
      const auto& m = cfg_.mobility;
      Mobility2Spec s;
      s.ell = m.ell;
      s.a = m.a;
      s.C = m.C;
      s.cb = cb;
      s.kahler = m.kahler;
      s.rho_lo = m.rho_lo;
      s.rho_hi = m.rho_hi;
      s.window = cfg_.window;
      in.mobility = build_mobility2(s);
      in.chart = in.mobility.chart;
    } else if (k == "jordan") {
      const auto& j = cfg_.jordan;
      JordanOdeSpec s;
      s.size = j.size;
      s.n2 = j.n2;
      s.C = j.C;
      s.rho0 = j.rho0;
      s.rho_lo = j.rho_lo;
      s.rho_hi = j.rho_hi;
      s.init = j.init;
      in.ode = solve_jordan_odes(s);
      const std::vector<double> lo(j.lo.begin(), j.lo.begin() + j.size),
          hi(j.hi.begin(), j.hi.begin() + j.size);
      in.block = build_jordan_block(*in.ode, lo, hi);
      if (j.a.empty()) {
        in.chart = *in.block;
      } else {
        JordanChartSpec p;
        p.ode = *in.ode;
        p.a = j.a;
        p.lo = j.lo;
        p.hi = j.hi;
        in.chart = build_jordan_pair(p);
      }
    } else if (k == "appendix") {
      const auto& a = cfg_.appendix;
      in.chart = build_final_metric(a.B, cb, a.kahler, a.rho_lo, a.rho_hi, cfg_.window);
    }
    if (cfg_.defect != 0.0) in.chart = with_defect(in.chart, cfg_.defect);
    return in;
  }

  std::map<std::string, ChartCheck> chart_checks(const Instance& in) const {
    std::map<std::string, ChartCheck> m;
    m["kahler"] = check_kahler;
    m["cproj"] = cproj_residual;
    m["proj"] = proj_residual;
    m["hamiltonian"] = hamiltonian_killing_check;
    m["partner"] = connection_difference_check;
    m["killing"] = [](SampleBatch& b, double t) {
      ResidualReport r = killing_field_suite(b, t);
      return r;
    };
    m["recurrence"] = a_on_k_recurrence;
    m["geodesic"] = [](SampleBatch& b, double t) {
      return totally_geodesic_residual(b, gradient_span(), t);
    };
    m["duality"] = duality_identities;
    m["ricci"] = ricci_identity_check;
    m["spectrum"] = spectrum_check;
    const double C = cfg_.kind == "jordan" ? cfg_.jordan.C : cfg_.mobility.C;
    m["lie"] = [C](SampleBatch& b, double t) {
      return lie_residual_suite(b, canonical_coefficients(b.chart(), C), t);
    };
    int m0 = 0, m1 = 0;
    for (const auto& c : in.chart.constants) {
      if (c.value == 0.0) m0 += c.multiplicity;
      if (c.value == 1.0) m1 += c.multiplicity;
    }
    const double pred = volume_prediction(cfg_.mobility.C, m0, m1, in.chart.kahler);
    m["volume"] = [pred](SampleBatch& b, double t) { return volume_coefficient(b, pred, t); };
    const double B = cfg_.appendix.B;
    m["third_order"] = [B](SampleBatch& b, double t) { return third_order_residual(b, B, t); };
    return m;
  }

  void run_chart_checks(const Instance& in) {
    const auto table = chart_checks(in);
    std::vector<std::string> ids;
    for (const auto& id : res_.checks)
      if (table.count(id) && id != "split") ids.push_back(id);
    const bool jordan = cfg_.kind == "jordan";
    // proj on a Jordan scenario is checked on the block alone and on the glued chart
    const GridSpec grid{cfg_.grid.per_axis, cfg_.grid.random, cfg_.grid.seed};
    const int order = selected("third_order") ? 3 : 2;
    const auto xs = sample_points(in.chart, grid);
    if (!ids.empty()) {
      res_.report.append(run_chunked(in.chart, xs, order, [&](SampleBatch& b) {
        ResidualReport r;
        for (const auto& id : ids)
          r.append(guarded(id, [&] { return table.at(id)(b, tol(id)); }));
        return r;
      }));
    }
    if (jordan && in.block && (selected("split") || (selected("proj") && in.block->dim != in.chart.dim))) {
      const Chart& blk = *in.block;
      const auto bx = sample_points(blk, grid);
      res_.report.append(run_chunked(blk, bx, 1, [&](SampleBatch& b) {
        ResidualReport r;
        if (selected("split"))
          r.append(guarded("split", [&] {
            return split_block_residual(b, cfg_.jordan.n2, cfg_.jordan.C, tol("split"));
          }));
        if (selected("proj") && blk.dim != in.chart.dim)
          r.append(guarded("proj", [&] {
            ResidualReport p = proj_residual(b, tol("proj"));
            for (auto& e : p.entries) e.name = "block." + e.name;
            return p;
          }));
        return r;
      }));
    }
    if (!csv_dir_.empty()) {
      std::vector<std::string> header = in.chart.coords;
      header.push_back("trA");
      header.push_back("det_g");
      std::vector<std::vector<double>> rows;
      for (const auto& x : xs) {
        try {
          const Fields f = in.chart.eval(x, 0);
          auto row = x;
          row.push_back(values(f.A).trace());
          row.push_back(values(f.g).determinant());
          rows.push_back(std::move(row));
        } catch (const DomainError&) {
        }
      }
      csv("samples.csv", header, rows);
    }
  }

  void run_planarity(const Chart& chart) {
    res_.report.append(guarded("planarity", [&] {
      CurveState s;
      s.x = midpoint(chart);
      s.v = cfg_.curve.velocity;
      if (s.v.empty())
        for (int a = 0; a < chart.dim; ++a) s.v.push_back(1.0 / (a + 1.0));
      if (static_cast<int>(s.v.size()) != chart.dim)
        throw std::invalid_argument("curve velocity needs one entry per coordinate");
      const auto zero = [](double) { return 0.0; };
      const Trajectory tr = integrate_jplanar(chart, s, zero, zero, cfg_.curve.T, 1e-12, cfg_.curve.samples);
      const PlanarityResult hat = jplanarity_residual(tr, partner_chart(chart));
      const PlanarityResult same = jplanarity_residual(tr, chart);
      if (tr.exited) res_.notes.push_back(fmt::format("geodesic left the window at t = {:.6g}", tr.exit_time));
      ResidualReport r;
      const double t = tol("planarity");
      r.add(entry("planarity.partner", "g-geodesic is J-planar for the partner metric", hat.residual, t,
                  hat.samples - hat.degenerate, hat.degenerate));
      r.add(entry("planarity.metric", "g-geodesic is J-planar for g", same.residual, t,
                  same.samples - same.degenerate, same.degenerate));
      std::vector<std::string> header{"t"};
      for (const auto& c : chart.coords) header.push_back(c);
      std::vector<std::vector<double>> rows;
      for (const auto& st : tr.states) {
        std::vector<double> row{st.t};
        row.insert(row.end(), st.x.begin(), st.x.end());
        rows.push_back(std::move(row));
      }
      csv("trajectory.csv", header, rows);
      return r;
    }));
  }

  void run_transport(const Chart& chart) {
    res_.report.append(guarded("transport", [&] {
      const auto rho = rho_coordinates(chart);
      if (rho.empty()) throw std::invalid_argument("chart has no eigenvalue coordinate");
      std::vector<double> x0 = midpoint(chart);
      x0[rho[0]] = 0.5;
      const auto tr = logistic_transport(chart, x0, rho[0], cfg_.mobility.t_min, cfg_.mobility.t_max, 61);
      ResidualReport r;
      r.add(entry("transport.logistic", "rho(t) = rho0 e^t / (1 - rho0 + rho0 e^t) along v", tr.max_error,
                  tol("transport"), static_cast<int>(tr.t.size())));
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < tr.t.size(); ++i) rows.push_back({tr.t[i], tr.rho[i], tr.logistic[i]});
      csv("transport.csv", {"t", "rho", "logistic"}, rows);
      return r;
    }));
  }

  void run_jordan(const Instance& in) {
    const auto& j = cfg_.jordan;
    const JordanOdeSolution& sol = *in.ode;
    if (selected("ode")) {
      res_.report.append(guarded("ode", [&] {
        ResidualReport r;
        const double t = tol("ode");
        const OdeResidual od = jordan_ode_residual(sol);
        r.add(entry("ode.residual", "F, G1[, H1] solve the block ODE system", od.residual, t, od.samples));
        if (j.size == 3)
          r.add(entry("ode.g1_constant", "G1' = 0 for 3x3 blocks", od.g1_spread, t * 1e-3, od.samples));
        // scalar analogue against its closed form a (1 - rho)^-C rho^(n+1+C)
        const int n = j.n2;
        const double F0 = j.init[0];
        const QuinticSpline Fs = solve_scalar_ode(n, j.C, j.rho0, F0, j.rho_lo, j.rho_hi);
        const double p = n + 1.0 + j.C;
        const double a = F0 / (std::pow(1.0 - j.rho0, -j.C) * std::pow(j.rho0, p));
        const ScalarFn exact = ScalarFn::power_law(a, j.C, p);
        double err = 0.0;
        int m = 0;
        for (int k = 0; k <= 200; ++k) {
          const double rr = j.rho_lo + (j.rho_hi - j.rho_lo) * k / 200.0;
          err = std::max(err, rel(std::abs(Fs.derivs(rr)[0] - exact(rr)), std::abs(exact(rr))));
          ++m;
        }
        r.add(entry("ode.scalar_closed_form", "1x1 block: F = a (1 - rho)^-C rho^(n+1+C)", err, t, m));
        std::vector<std::string> header{"rho", "F", "G1"};
        if (j.size == 3) header.push_back("H1");
        std::vector<std::vector<double>> rows;
        const auto comps = sol.components();
        for (int k = 0; k <= 200; ++k) {
          const double rr = j.rho_lo + (j.rho_hi - j.rho_lo) * k / 200.0;
          std::vector<double> row{rr};
          for (const auto& c : comps) row.push_back(c.derivs(rr)[0]);
          rows.push_back(std::move(row));
        }
        csv("ode.csv", header, rows);
        return r;
      }));
    }
    if (selected("alpha")) {
      res_.report.append(guarded("alpha", [&] {
        const Chart& blk = *in.block;
        SampleBatch b(blk, GridSpec{cfg_.grid.per_axis, cfg_.grid.random, cfg_.grid.seed}, 0);
        Tally t;
        const std::string name = "alpha.basis_invariance";
        for_each_point(b, t, {name}, [&](Point& p, Tally& out) {
          const Eigen::MatrixXd h = values(p.f().g), L = values(p.f().A);
          const double rho = p.x()[j.size - 1];
          const JordanFrame fr = jordan_canonical_basis(h, L, rho);
          const Eigen::VectorXd top = fr.E.col(j.size - 1);
          const double a0 = jordan_alpha(fr, L, rho, top);
          double worst = 0.0;
          for (double s : {-1.3, 0.7, 2.1})
            worst = std::max(worst, std::abs(jordan_alpha(fr, L, rho, top + s * fr.E.col(0)) - a0));
          out.add(name, rel(worst, std::abs(a0)), p.x());
        });
        return t.report(tol("alpha"), {{name, "alpha unchanged under e_top -> e_top + s e_1"}});
      }));
    }
    if (selected("blowup")) {
      res_.report.append(guarded("blowup", [&] {
        const double rho1 = 0.5 * (j.lo[j.size - 1] + j.hi[j.size - 1]);
        std::vector<double> rho, F;
        for (std::size_t i = 0; i < j.a.size(); ++i) {
          const double r = 0.5 * (j.lo[j.size + i] + j.hi[j.size + i]);
          rho.push_back(r);
          F.push_back(ScalarFn::power_law(j.a[i], j.C, j.n2 + 1.0 + j.size + j.C)(r));
        }
        const BlowupScan s = blowup_jordan(j.size, sol.F.as_function("F"), rho1, rho, F);
        const double expect = j.size == 2 ? 3.0 : 2.0;
        ResidualReport r;
        r.add(entry("blowup.exponent",
                    j.size == 2 ? "f'(rho_1) ~ (F + x)^-3" : "f'(rho_1) ~ (F + 2 x2)^-2",
                    std::abs(s.exponent - expect), tol("blowup"), static_cast<int>(s.value.size())));
        r.add(flag("blowup.monotone", "|f'(rho_1)| increases on the approach", s.monotone));
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < s.distance.size(); ++i) rows.push_back({s.distance[i], s.value[i]});
        csv("blowup.csv", {"distance", "value"}, rows);
        return r;
      }));
    }
  }

  void run_appendix() {
    const auto& a = cfg_.appendix;
    if (selected("fppp")) {
      res_.report.append(guarded("fppp", [&] {
        const FpppLimit f = fppp_limit(a.F.make(), a.x, a.delta);
        ResidualReport r;
        r.add(entry("fppp.richardson", "lambda(x + d, x - d) -> F'''(x) / 24", f.error, tol("fppp")));
        return r;
      }));
    }
    if (selected("cubic")) {
      res_.report.append(guarded("cubic", [&] {
        const ScalarFn F = ScalarFn::polynomial({0, 0, 0, 1});
        double err = 0.0;
        int m = 0;
        for (double r1 : {0.1, 0.3, 0.55})
          for (double r2 : {0.2, 0.45, 0.9}) {
            err = std::max(err, std::abs(lambda_two(F, r1, r2) - 0.25));
            ++m;
          }
        ResidualReport r;
        r.add(entry("cubic.quarter", "F = t^3 gives lambda = 1/4", err, tol("cubic"), m));
        return r;
      }));
    }
    if (selected("vandermonde")) {
      res_.report.append(guarded("vandermonde", [&] {
        const double t = tol("vandermonde");
        std::mt19937_64 rng(cfg_.grid.seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double id = 0.0, ann = 0.0, lead = 0.0;
        int m = 0;
        for (int ell : {2, 3})
          for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> rho(ell);
            for (auto& x : rho) x = u(rng);
            std::sort(rho.begin(), rho.end());
            bool spaced = true;
            for (int i = 1; i < ell; ++i) spaced = spaced && rho[i] - rho[i - 1] > 0.05;
            if (!spaced) continue;
            std::vector<KFn> k;
            for (int i = 0; i < ell; ++i) {
              const double c1 = u(rng), c2 = u(rng);
              k.push_back([c1, c2](double x) { return std::exp(c1 * x) + c2 * std::sin(x); });
            }
            const double s = sum_over_delta(k, rho);
            id = std::max(id, rel(std::abs(s - det_quotient(k, rho)), std::abs(s)));
            for (int p = 0; p <= ell - 2; ++p)
              ann = std::max(ann, std::abs(sum_over_delta({[p](double x) { return std::pow(x, p); }}, rho)));
            lead = std::max(lead, std::abs(sum_over_delta({[ell](double x) { return std::pow(x, ell - 1); }}, rho) - 1.0));
            ++m;
          }
        ResidualReport r;
        r.add(entry("vandermonde.identity", "sum k_i / Delta_i = determinant quotient", id, t, m));
        r.add(entry("vandermonde.annihilation", "k = t^j, j <= l - 2 gives 0", ann, t * 0.1, m));
        r.add(entry("vandermonde.leading", "k = t^(l-1) gives 1", lead, t * 10.0, m));
        return r;
      }));
    }
    if (selected("window")) {
      res_.report.append(guarded("window", [&] {
        double err = 0.0;
        for (int ell : {1, 2, 3}) {
          const CWindow w = admissible_window(ell);
          err = std::max({err, std::abs(w.lower + 2.0), std::abs(w.upper - (1.0 - ell))});
          res_.notes.push_back(fmt::format("admissible C window for l = {}: ({:.4f}, {:.4f}){}", ell, w.lower,
                                           w.upper, w.empty() ? " empty" : ""));
        }
        ResidualReport r;
        r.add(entry("window.endpoints", "f -> 0 at both corners iff -2 < C < 1 - l", err, tol("window"), 3));
        return r;
      }));
    }
    if (selected("corners")) {
      res_.report.append(guarded("corners", [&] {
        const int ell = 2;
        const BlowupScan div = blowup_ell2(ScalarFn::power_law(1.0, -1.5, 1.0 + ell - 1.5), 0.0);
        double var = 0.0;
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < div.distance.size(); ++i) rows.push_back({-1.5, 0.0, div.distance[i], div.value[i]});
        for (double C : {0.0, -1.0, -2.0, -3.0})
          for (double corner : {0.0, 1.0}) {
            const BlowupScan s = blowup_ell2(ScalarFn::power_law(1.0, C, 1.0 + ell + C), corner);
            var = std::max(var, s.tail_variation);
            for (std::size_t i = 0; i < s.distance.size(); ++i)
              rows.push_back({C, corner, s.distance[i], s.value[i]});
          }
        csv("corners.csv", {"C", "corner", "distance", "lambda"}, rows);
        ResidualReport r;
        r.add(flag("corners.divergent", "C = -1.5: lambda unbounded as (rho_1, rho_2) -> (0, 0)", div.diverges));
        r.add(entry("corners.bounded", "C in {0, -1, -2, -3}: lambda bounded at both corners", var,
                    tol("corners"), 8));
        return r;
      }));
    }
  }

  static EigenOde family(const std::string& f) {
    if (f == "elliptic") return EigenOde::Elliptic;
    if (f == "logistic") return EigenOde::Logistic;
    return EigenOde::Parabolic;
  }

  void run_flows() {
    const auto& fl = cfg_.flows;
    std::vector<std::complex<double>> starts = fl.starts;
    if (starts.empty())
      starts = {{0.5, 0.3}, {0.5, -0.3}, {0.5, 0.8}, {-0.4, 0.5}, {1.4, 0.5}, {0.2, -1.2}, {0.5, 0.0}};
    const double t = tol("phase");
    ResidualReport r;
    double fixed = 0.0, circle = 0.0;
    int nfixed = 0, ncircle = 0;
    for (const auto& name : fl.families) {
      const EigenOde ode = family(name);
      for (const auto& z : fixed_points(ode)) {
        fixed = std::max(fixed, std::abs(ode_rhs(ode, z)));
        const auto s = eigenvalue_flow(ode, z, fl.T, 21);
        for (const auto& w : s.rho) fixed = std::max(fixed, std::abs(w - z));
        ++nfixed;
      }
      std::vector<std::vector<double>> rows;
      for (std::size_t k = 0; k < starts.size(); ++k) {
        // backward branch reversed, then the forward branch without its t = 0 sample
        const auto back = eigenvalue_flow(ode, starts[k], -fl.T, fl.samples);
        const auto fwd = eigenvalue_flow(ode, starts[k], fl.T, fl.samples);
        for (std::size_t i = back.t.size(); i-- > 0;)
          rows.push_back({static_cast<double>(k), back.t[i], back.rho[i].real(), back.rho[i].imag()});
        for (std::size_t i = 1; i < fwd.t.size(); ++i)
          rows.push_back({static_cast<double>(k), fwd.t[i], fwd.rho[i].real(), fwd.rho[i].imag()});
        if (starts[k].imag() == 0.0) continue;
        // non-real solutions run on circles through the fixed points (tangent to R at 0 for rho^2)
        std::vector<std::complex<double>> pts = back.rho;
        pts.insert(pts.end(), fwd.rho.begin(), fwd.rho.end());
        const CircleFit c = circle_fit(pts);
        double d = c.residual;
        if (ode == EigenOde::Elliptic) {
          // closed orbits around i and -i: centre on the imaginary axis, i and -i mutually inverse
          const std::complex<double> I(0.0, 1.0);
          d = std::max({d, std::abs(c.center.real()),
                        std::abs(std::abs(I - c.center) * std::abs(-I - c.center) - c.radius * c.radius) /
                            std::max(1.0, c.radius)});
        } else {
          // through 0 and 1 (logistic), through 0 tangent to the real axis (parabolic)
          for (const auto& fp : fixed_points(ode)) d = std::max(d, std::abs(std::abs(fp - c.center) - c.radius));
          if (ode == EigenOde::Parabolic) d = std::max(d, std::abs(c.center.real()));
        }
        circle = std::max(circle, rel(d, c.radius));
        ++ncircle;
      }
      csv("phase_" + name + ".csv", {"curve", "t", "re", "im"}, rows);
      std::string fps;
      for (const auto& z : fixed_points(ode)) fps += fmt::format(" {:g}{:+g}i", z.real(), z.imag());
      res_.notes.push_back(fmt::format("{} ({}): fixed points{}", name, ode_name(ode), fps));
    }
    r.add(entry("phase.fixed_points", "fixed points are zeros of the right-hand side and stay put", fixed, t,
                nfixed));
    r.add(entry("phase.circles", "non-real trajectories: circles around +-i, through 0 and 1, tangent to R at 0", circle, t,
                ncircle));
    // closed forms
    {
      const auto s = eigenvalue_flow(EigenOde::Logistic, 0.5, 4.0, 81);
      double e = 0.0;
      for (std::size_t i = 0; i < s.t.size(); ++i)
        e = std::max(e, std::abs(s.rho[i] - 1.0 / (1.0 + std::exp(-s.t[i]))));
      r.add(entry("phase.logistic", "rho' = rho (1 - rho), rho0 = 1/2: rho = 1 / (1 + e^-t)", e, t,
                  static_cast<int>(s.t.size())));
    }
    {
      const double r0 = 0.5;
      const auto s = eigenvalue_flow(EigenOde::Elliptic, r0, 4.0, 81);
      const double exact = std::numbers::pi / 2 - std::atan(r0);
      const double e = s.blew_up ? std::abs(s.blowup_time - exact) : INFINITY;
      r.add(entry("phase.elliptic_blowup", "rho' = rho^2 + 1 real: blow-up at pi/2 - atan(rho0)", e, t));
    }
    res_.report.append(r);
  }

  const ScenarioConfig& cfg_;
  const RunOptions& opt_;
  RunResult& res_;
  std::string csv_dir_;
};

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace

std::vector<CheckInfo> available_checks(const ScenarioConfig& c) {
  const bool kahler = c.kind == "appendix" ? c.appendix.kahler : c.mobility.kahler;
  return infos(check_ids(c.kind, kahler, !c.jordan.a.empty()));
}

std::vector<CheckInfo> available_checks(const std::string& kind) {
  std::vector<std::string> ids = check_ids(kind, true, true);
  for (const auto& id : check_ids(kind, false, true))
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  return infos(ids);
}

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  RunResult res;
  res.effective = config;
  if (options.grid) res.effective.grid.per_axis = *options.grid;
  if (options.seed) res.effective.grid.seed = *options.seed;
  if (!(options.tol_scale > 0)) throw std::invalid_argument("tolerance scale must be positive");
  const auto avail = available_checks(res.effective);
  std::vector<std::string> want = res.effective.checks;
  if (want.empty())
    for (const auto& c : avail) want.push_back(c.id);
  if (!options.only.empty()) {
    for (const auto& o : options.only)
      if (std::none_of(avail.begin(), avail.end(), [&](const CheckInfo& c) { return c.id == o; }))
        throw std::invalid_argument("check '" + o + "' is not available for scenario '" + config.kind + "'");
    std::vector<std::string> keep;
    for (const auto& w : want)
      if (std::find(options.only.begin(), options.only.end(), w) != options.only.end()) keep.push_back(w);
    want = keep;
  }
  // run order follows the catalog
  for (const auto& c : avail)
    if (std::find(want.begin(), want.end(), c.id) != want.end()) res.checks.push_back(c.id);
  Runner(res.effective, options, res).run();
  if (options.tol_scale != 1.0)
    res.notes.push_back(fmt::format("tolerance scale {:g}", options.tol_scale));
  return res;
}

std::string report_json(const RunResult& r) {
  using json = nlohmann::ordered_json;
  auto num = [](double x) -> json {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  };
  json j;
  j["scenario"] = r.effective.name;
  j["kind"] = r.effective.kind;
  j["checks"] = r.checks;
  json entries = json::array();
  for (const auto& e : r.report.entries) {
    json x;
    x["name"] = e.name;
    x["anchor"] = e.anchor;
    x["residual"] = num(e.residual);
    x["tol"] = num(e.tol);
    x["pass"] = e.pass;
    x["samples"] = e.samples;
    x["excluded"] = e.excluded;
    if (!e.note.empty()) x["note"] = e.note;
    entries.push_back(std::move(x));
  }
  j["entries"] = std::move(entries);
  j["notes"] = r.notes;
  j["csv"] = r.csv_files;
  j["pass"] = r.report.pass() && !r.report.entries.empty();
  json prov;
  prov["config_hash"] = fnv1a(serialize_config(r.effective));
  prov["seed"] = r.effective.grid.seed;
  prov["grid"] = r.effective.grid.per_axis;
  prov["random"] = r.effective.grid.random;
  prov["version"] = version_string();
  j["provenance"] = std::move(prov);
  return j.dump(2) + "\n";
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt::format("{:.17g}", row[i]);
    out << "\n";
  }
}

}  // namespace cpg
