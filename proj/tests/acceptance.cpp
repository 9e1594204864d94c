// Acceptance runner: one PASS/FAIL line per criterion, tolerances pinned here.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cpg/curvspec.hpp"
#include "cpg/flows.hpp"
#include "cpg/killing.hpp"
#include "cpg/vandermonde.hpp"
#include "fd_oracle.hpp"
#include "instances.hpp"
#include "random_expr.hpp"

using namespace cpg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Running maximum of a named residual against a pinned tolerance.
struct Gate {
  std::string name;
  double tol;
  double worst = 0.0;
  bool seen = false;
  void add(double r) {
    seen = true;
    if (!(r <= worst)) worst = r;  // NaN sticks
  }
  void add(const ResidualReport& r) {
    for (const auto& e : r.entries) {
      add(e.residual);
      if (e.samples == 0) worst = INFINITY;  // nothing checked is a failure
    }
  }
  bool ok() const { return seen && worst <= tol; }
  std::string str() const { return fmt::format("{} {:.2e} <= {:.0e}", name, worst, tol); }
};

Outcome verdict(const std::vector<Gate>& gates, const std::string& extra = "") {
  Outcome o;
  std::string d;
  for (const auto& g : gates) {
    o.pass = o.pass && g.ok();
    d += (d.empty() ? "" : "; ") + g.str();
  }
  o.detail = d + extra;
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const GridSpec kCorpusGrid{5, 64, 1};

// ---- corpus ----
struct Instance {
  std::string label;
  Chart chart;
};

std::vector<Instance> corpus() {
  PairSpec complex_pair;
  complex_pair.blocks = {ComplexBlock{{{3.0, 0.0}, {1.0, 0.0}}}};
  complex_pair.lo = {-0.3, 0.2};
  complex_pair.hi = {0.3, 0.6};
  return {
      {"l1-plain", lift_nonconstant(inst::one_real())},
      {"l1-constant-0-1", lift_with_constant_block(inst::one_real(), inst::zero_one_blocks(), 0.5)},
      {"l2-dini", lift_nonconstant(inst::two_real())},
      {"complex-pair", lift_nonconstant(complex_pair)},
      {"real-complex", lift_nonconstant(inst::real_complex())},
      {"mobility2-l1", build_mobility2(inst::mobility(-0.5)).chart},
  };
}

const std::vector<Instance>& the_corpus() {
  static const std::vector<Instance> c = corpus();
  return c;
}

ResidualReport on_grid(const Chart& c, int order, const std::function<ResidualReport(SampleBatch&)>& f,
                       const GridSpec& g = kCorpusGrid) {
  return run_chunked(c, sample_points(c, g), order, f);
}

// 1
Outcome construction_soundness() {
  Gate k{"kahler", 1e-6}, c{"cproj", 1e-6};
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t samples = 0;
  for (const auto& in : the_corpus()) {
    samples += sample_points(in.chart, kCorpusGrid).size();
    const ResidualReport r = on_grid(in.chart, 2, [](SampleBatch& b) {
      ResidualReport out = check_kahler(b, 1e-6);
      out.append(cproj_residual(b, 1e-6));
      return out;
    });
    for (const auto& e : r.entries) {
      (e.name.rfind("kahler.", 0) == 0 ? k : c).add(e.residual);
      if (e.samples == 0) k.add(INFINITY);
    }
  }
  Gate time{"runtime s", 60.0};
  time.add(seconds_since(t0));
  return verdict({k, c, time}, fmt::format("; {} instances, {} samples", the_corpus().size(), samples));
}

// 2
Outcome killing_suite() {
  Gate l{"Killing fields", 1e-6}, rec{"recurrence", 1e-7};
  for (const auto& in : the_corpus()) {
    const ResidualReport r = on_grid(in.chart, 2, [](SampleBatch& b) {
      ResidualReport out = killing_field_suite(b, 1e-6);
      out.append(a_on_k_recurrence(b, 1e-7));
      return out;
    });
    for (const auto& e : r.entries) (e.name == "killing.AK_recurrence" ? rec : l).add(e.residual);
  }
  return verdict({l, rec});
}

// 3
Outcome duality() {
  PairSpec three;
  three.blocks = {RealBlock{1, {0.0, 1.0}}, RealBlock{-1, {2.0, 1.0}}, RealBlock{1, {4.0, 0.5}}};
  three.lo = {0.2, -0.3, -0.3};
  three.hi = {0.8, 0.3, 0.3};
  Gate mu{"mu_hat", 1e-7}, com{"commuting gradients", 1e-7};
  int pairs = 0;
  for (const PairSpec& s : {inst::two_real(1), inst::two_real(-1), inst::one_real(), three}) {
    const ResidualReport r = on_grid(build_quotient_pair(s), 2, [](SampleBatch& b) {
      return duality_identities(b, 1e-7);
    });
    mu.add(r.residual("duality.mu_hat"));
    com.add(r.residual("duality.commuting_gradients"));
    ++pairs;
  }
  return verdict({mu, com}, fmt::format("; {} pairs", pairs));
}

// 4
Outcome mobility_dynamics() {
  Gate lie{"lie", 1e-6}, tr{"transport", 1e-6};
  for (bool k : {true, false})
    for (double C : {-1.5, -1.0, -0.5}) {
      const Mobility2 m = build_mobility2(inst::mobility(C, k));
      lie.add(on_grid(m.chart, 1, [&](SampleBatch& b) {
        return lie_residual_suite(b, canonical_coefficients(m.chart, C), 1e-6);
      }));
      const auto rho = rho_coordinates(m.chart);
      std::vector<double> x0(m.chart.dim);
      for (int a = 0; a < m.chart.dim; ++a) x0[a] = 0.5 * (m.chart.lo[a] + m.chart.hi[a]);
      x0[rho.at(0)] = 0.5;
      tr.add(logistic_transport(m.chart, x0, rho[0], -3.0, 3.0, 121).max_error);
    }
  return verdict({lie, tr});
}

// 5
Outcome volume() {
  Gate v{"volume", 1e-5}, zero{"|f| at C = -1", 1e-5};
  for (bool k : {true, false})
    for (double C : {-1.5, -1.0, -0.5}) {
      const Mobility2 m = build_mobility2(inst::mobility(C, k));
      int m0 = 0, m1 = 0;
      for (const auto& e : m.chart.constants) (e.value == 0.0 ? m0 : m1) += e.multiplicity;
      const double pred = k ? (-C - 1.0) * (m0 + m1 + 1) : 0.5 * (-C - 1.0) * (m0 + m1);
      const ResidualReport r = on_grid(m.chart, 1, [&](SampleBatch& b) { return volume_coefficient(b, pred, 1e-5); });
      v.add(r);
      if (C == -1.0) zero.add(r.residual("volume.coefficient"));
    }
  return verdict({v, zero});
}

// 6
Outcome spectra() {
  // (i) two eigenvalue coordinates with common F
  const ScalarFn F = ScalarFn::power_law(1.0, -1.5, 1.5);
  PairSpec two;
  two.blocks = {RhoBlock{F}, RhoBlock{F}};
  two.lo = {0.2, 0.6};
  two.hi = {0.35, 0.8};
  const Chart c2 = lift_nonconstant(two);
  const auto rho = rho_coordinates(c2);
  Gate lam{"lambda vs numeric/4", 1e-5};
  on_grid(c2, 2, [&](SampleBatch& b) {
    for (auto& p : b.points()) {
      const SpectrumMatch m = compare_with_numeric(*p);
      const double want = lambda_two(F, p->x()[rho[1]], p->x()[rho[0]]);
      double best = INFINITY;
      for (const auto& z : m.spectrum.values) best = std::min(best, std::abs(z / 4.0 - want));
      lam.add(rel(best, std::abs(want)));
    }
    return ResidualReport{};
  }, GridSpec{3, 16, 2});
  // (ii) F = t^3
  Gate cubic{"cubic", 1e-8};
  const ScalarFn t3 = ScalarFn::polynomial({0, 0, 0, 1});
  for (double r1 : {0.1, 0.3, 0.55, 0.8})
    for (double r2 : {0.2, 0.45, 0.9})
      if (r1 != r2) cubic.add(std::abs(lambda_two(t3, r1, r2) - 0.25));
  // (iii) collision limit
  Gate rich{"richardson", 1e-3};
  for (const ScalarFn& f : {ScalarFn::polynomial({0.1, -0.4, 0.3, 1.0, 0.5}), F, ScalarFn::power_law(2.0, -0.5, 2.5)})
    for (double x : {0.3, 0.5, 0.7}) rich.add(fppp_limit(f, x, 1e-2).error);
  // (iv) predictions on a distinct-eigenvalue instance and a Jordan instance
  Gate pred{"predicted spectra", 1e-5}, closed{"Jordan p'(rho) vs closed form", 1e-5};
  pred.add(on_grid(lift_nonconstant(inst::two_real()), 2, [](SampleBatch& b) { return spectrum_check(b, 1e-5); },
                   GridSpec{3, 16, 3}));
  pred.add(on_grid(c2, 2, [](SampleBatch& b) { return spectrum_check(b, 1e-5); }, GridSpec{3, 16, 3}));
  const JordanOdeSolution sol = solve_jordan_odes(inst::jordan_ode(2));
  const Chart cj = build_jordan_pair(inst::jordan_pair(sol));
  const ScalarFn F2 = ScalarFn::power_law(1.0, -0.5, 3.5);
  int jordan_values = 0;
  pred.add(on_grid(cj, 2, [&](SampleBatch& b) {
    for (auto& p : b.points()) {
      const SpectrumMatch m = compare_with_numeric(*p);
      const auto& x = p->x();
      const auto d = sol.F.derivs(x[1]);
      const double want = jordan_curvature_eigenvalue(2, d[0], d[1], x[0], x[1], {x[2]}, {F2(x[2])});
      for (std::size_t k = 0; k < m.predicted.size(); ++k)
        if (m.predicted[k].i == m.predicted[k].j) {
          closed.add(rel(std::abs(m.predicted[k].value - want), std::abs(want)));
          ++jordan_values;
        }
    }
    return spectrum_check(b, 1e-5);
  }, GridSpec{3, 16, 4}));
  if (jordan_values == 0) closed.add(INFINITY);
  return verdict({lam, cubic, rich, pred, closed});
}

// 7
Outcome ricci_identity() {
  Gate g{"ricci", 1e-6};
  for (const auto& in : the_corpus())
    g.add(on_grid(in.chart, 2, [](SampleBatch& b) { return ricci_identity_check(b, 1e-6); }));
  return verdict({g}, fmt::format("; {} instances", the_corpus().size()));
}

// 8
Outcome vandermonde() {
  Gate id{"identity", 1e-11}, ann{"annihilation", 1e-12}, win{"window endpoints", 0.05};
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int l = 1; l <= 3; ++l)
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> rho(l);
      for (auto& x : rho) x = u(rng);
      std::sort(rho.begin(), rho.end());
      bool spaced = true;
      for (int i = 1; i < l; ++i) spaced = spaced && rho[i] - rho[i - 1] > 0.05;
      if (!spaced) continue;
      std::vector<KFn> k;
      for (int i = 0; i < l; ++i) {
        const double a = u(rng), b = u(rng);
        k.push_back([a, b](double x) { return std::exp(a * x) + b * std::sin(x); });
      }
      const double s = sum_over_delta(k, rho);
      id.add(rel(std::abs(s - det_quotient(k, rho)), std::abs(s)));
      for (int p = 0; p <= l - 2; ++p)
        ann.add(std::abs(sum_over_delta({[p](double x) { return std::pow(x, p); }}, rho)));
    }
  std::string windows;
  for (int l = 1; l <= 3; ++l) {
    const CWindow w = admissible_window(l);
    win.add(std::max(std::abs(w.lower + 2.0), std::abs(w.upper - (1.0 - l))));
    windows += fmt::format(" l={}:({:.3f},{:.3f}){}", l, w.lower, w.upper, w.empty() ? "empty" : "");
  }
  return verdict({id, ann, win}, ";" + windows);
}

// 9
Outcome blowup() {
  const JordanOdeSolution sol = solve_jordan_odes(inst::jordan_ode(2));
  const BlowupScan j = blowup_jordan(2, sol.F.as_function("F"), 0.3, {0.6},
                                     {ScalarFn::power_law(1.0, -0.5, 3.5)(0.6)});
  Gate ex{"jordan2 |exponent - 3|", 0.1}, div{"C=-1.5 divergence", 0.5}, bd{"bounded variation", 1e-3};
  ex.add(std::abs(j.exponent - 3.0));
  div.add(blowup_ell2(ScalarFn::power_law(1.0, -1.5, 1.5), 0.0).diverges ? 0.0 : 1.0);
  for (double C : {0.0, -1.0, -2.0, -3.0})
    for (double corner : {0.0, 1.0}) {
      const BlowupScan s = blowup_ell2(ScalarFn::power_law(1.0, C, 3.0 + C), corner);
      bd.add(s.diverges ? INFINITY : s.tail_variation);
    }
  return verdict({ex, div, bd}, fmt::format("; exponent {:.4f}", j.exponent));
}

// 10
Outcome jordan_odes() {
  Gate ode{"ODE residual", 1e-9}, g1{"G1 spread", 1e-12}, split{"split", 1e-6}, sol1{"Sol1", 1e-9};
  for (int size : {2, 3}) {
    const JordanOdeSolution s = solve_jordan_odes(inst::jordan_ode(size));
    const OdeResidual r = jordan_ode_residual(s);
    ode.add(r.residual);
    if (size == 3) g1.add(r.g1_spread);
    const JordanChartSpec cs = inst::jordan_pair(s);
    const Chart blk = build_jordan_block(s, {cs.lo.begin(), cs.lo.begin() + size},
                                         {cs.hi.begin(), cs.hi.begin() + size});
    split.add(on_grid(blk, 1, [](SampleBatch& b) { return split_block_residual(b, 1, -0.5, 1e-6); }));
  }
  for (int n : {1, 2, 3})
    for (double C : {-1.5, -0.5, 0.5}) {
      const double F0 = 0.8;
      const QuinticSpline F = solve_scalar_ode(n, C, 0.5, F0, 0.15, 0.85);
      const double p = n + 1.0 + C;
      const ScalarFn exact = ScalarFn::power_law(F0 / (std::pow(0.5, -C) * std::pow(0.5, p)), C, p);
      for (int k = 0; k <= 100; ++k) {
        const double r = 0.15 + 0.7 * k / 100.0;
        sol1.add(rel(std::abs(F.derivs(r)[0] - exact(r)), std::abs(exact(r))));
      }
    }
  return verdict({ode, g1, split, sol1});
}

// 11
Outcome planarity() {
  const Chart c = build_main_example(inst::real_complex(), {ConstantBlock{1.5, 2, {}}}, 0.5);
  const Chart hat = partner_chart(c);
  Gate g{"partner J-planarity", 1e-5};
  std::vector<double> x0(c.dim);
  for (int a = 0; a < c.dim; ++a) x0[a] = 0.5 * (c.lo[a] + c.hi[a]);
  const std::vector<std::vector<double>> vs{{0.3, -0.2, 0.2, 0.2, 0.1, 0.1, 0.2, -0.2},
                                            {-0.1, 0.3, 0.1, -0.2, 0.2, -0.1, 0.1, 0.1},
                                            {0.2, 0.1, -0.1, 0.1, -0.3, 0.2, -0.2, 0.3}};
  int clipped = 0, samples = 0;
  const auto zero = [](double) { return 0.0; };
  for (const auto& v : vs) {
    CurveState s;
    s.x = x0;
    s.v = v;
    const Trajectory tr = integrate_jplanar(c, s, zero, zero, 1.0, 1e-12, 101);
    clipped += tr.exited;
    const PlanarityResult r = jplanarity_residual(tr, hat);
    g.add(r.samples - r.degenerate > 0 ? r.residual : INFINITY);
    samples += r.samples - r.degenerate;
  }
  return verdict({g}, fmt::format("; {} geodesics, {} samples, {} window-clipped", vs.size(), samples, clipped));
}

// 12
Outcome oracle_equivalence() {
  Gate o{"min convergence order deficit", 0.1};
  std::mt19937_64 rng(20240);
  std::uniform_real_distribution<double> u(-1, 1);
  int derivs = 0;
  double min_order = INFINITY;
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 3;
    const auto expr = rexpr::make(rng, dim, 4);
    std::vector<double> x0(dim);
    for (auto& v : x0) v = u(rng);
    std::vector<Jet> xs;
    for (int i = 0; i < dim; ++i) xs.push_back(Jet::seed(i, x0[i], dim, 3));
    const Jet j = rexpr::eval(*expr, xs);
    const fd::Fn f = [&](const std::vector<double>& x) { return rexpr::eval(*expr, x); };
    auto gate = [&](const fd::Convergence& c, double floor) {
      ++derivs;
      // a second-order oracle: either the error is at rounding level or it shrinks by 4 when h halves
      if (c.err_h > floor) {
        min_order = std::min(min_order, c.order());
        o.add(std::max(0.0, 2.0 - c.order()));
      } else {
        o.add(0.0);
      }
    };
    for (int a = 0; a < dim; ++a) {
      gate(fd::check([&](double h) { return fd::d1(f, x0, a, h); }, j.d(a), 1e-3), 1e-10);
      for (int b = a; b < dim; ++b) {
        gate(fd::check([&](double h) { return fd::d1(fd::along(f, a, h), x0, b, h); }, j.d(a, b), 1e-2), 1e-9);
        for (int c = b; c < dim; ++c)
          gate(fd::check([&](double h) { return fd::d1(fd::along(fd::along(f, a, h), b, h), x0, c, h); },
                         j.d(a, b, c), 3e-2),
               1e-8);
      }
    }
  }
  return verdict({o}, fmt::format("; {} derivatives of orders 1-3, min measured order {:.3f}", derivs, min_order));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"construction soundness", construction_soundness},
      {"Killing suite", killing_suite},
      {"duality identities", duality},
      {"mobility-2 dynamics", mobility_dynamics},
      {"volume coefficient", volume},
      {"curvature spectra", spectra},
      {"Ricci identity", ricci_identity},
      {"Vandermonde kernels", vandermonde},
      {"blow-up certificates", blowup},
      {"Jordan ODE solutions", jordan_odes},
      {"J-planarity transfer", planarity},
      {"oracle equivalence", oracle_equivalence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    fmt::print("[{}] {:2d} {}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail,
               seconds_since(t0));
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
