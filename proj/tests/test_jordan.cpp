#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cpg/curvspec.hpp"
#include "cpg/flows.hpp"
#include "cpg/kahler.hpp"
#include "instances.hpp"

using namespace cpg;

namespace {

const GridSpec kGrid{3, 8, 6};

std::vector<double> first(const std::vector<double>& v, int n) { return {v.begin(), v.begin() + n}; }

}  // namespace

TEST_CASE("Jordan ODE system is solved to integrator accuracy") {
  for (int size : {2, 3}) {
    const JordanOdeSolution s = solve_jordan_odes(inst::jordan_ode(size));
    const OdeResidual r = jordan_ode_residual(s);
    INFO("size " << size);
    CHECK(r.samples > 100);
    CHECK(r.residual < 1e-9);
    if (size == 3) CHECK(r.g1_spread < 1e-12);
    // initial data reproduced at rho0
    const auto comps = s.components();
    for (std::size_t k = 0; k < comps.size(); ++k)
      CHECK(comps[k].derivs(0.5)[0] == doctest::Approx(inst::jordan_ode(size).init[k]).epsilon(1e-12));
  }
}

TEST_CASE("scalar analogue matches its closed form") {
  for (double C : {-1.5, -0.5, 0.3}) {
    const int n = 2;
    const QuinticSpline F = solve_scalar_ode(n, C, 0.5, 1.2, 0.15, 0.85);
    const double p = n + 1.0 + C;
    const double a = 1.2 / (std::pow(0.5, -C) * std::pow(0.5, p));
    const ScalarFn exact = ScalarFn::power_law(a, C, p);
    for (double r : {0.15, 0.3, 0.61, 0.85}) CHECK(F.derivs(r)[0] == doctest::Approx(exact(r)).epsilon(1e-10));
  }
}

TEST_CASE("split block equations and projective compatibility on the block alone") {
  for (int size : {2, 3}) {
    const JordanOdeSolution s = solve_jordan_odes(inst::jordan_ode(size));
    const JordanChartSpec cs = inst::jordan_pair(s);
    const Chart blk = build_jordan_block(s, first(cs.lo, size), first(cs.hi, size));
    const ResidualReport r = inst::run(blk, kGrid, 1, [&](SampleBatch& b) {
      ResidualReport out = split_block_residual(b, 1, -0.5, 1e-6);
      out.append(proj_residual(b, 1e-6));
      return out;
    });
    INFO("size " << size);
    CHECK(r.pass());
    // a wrong n2 breaks the block field equation
    CHECK_FALSE(inst::run(blk, kGrid, 1, [&](SampleBatch& b) { return split_block_residual(b, 2, -0.5, 1e-6); })
                    .pass());
  }
}

TEST_CASE("glued Jordan chart: projective pair, Lie equations, curvature identity") {
  for (int size : {2, 3}) {
    const JordanOdeSolution s = solve_jordan_odes(inst::jordan_ode(size));
    const Chart c = build_jordan_pair(inst::jordan_pair(s));
    const ResidualReport r = inst::run(c, kGrid, 2, [&](SampleBatch& b) {
      ResidualReport out = proj_residual(b, 1e-6);
      out.append(lie_residual_suite(b, canonical_coefficients(c, -0.5), 1e-6));
      out.append(ricci_identity_check(b, 1e-6));
      return out;
    });
    for (const auto& e : r.entries) {
      INFO("size " << size << " " << e.name << " " << e.residual);
      CHECK(e.pass);
    }
  }
}

TEST_CASE("alpha does not depend on the choice of top basis vector") {
  for (int size : {2, 3}) {
    const JordanOdeSolution s = solve_jordan_odes(inst::jordan_ode(size));
    const JordanChartSpec cs = inst::jordan_pair(s);
    const Chart blk = build_jordan_block(s, first(cs.lo, size), first(cs.hi, size));
    std::vector<double> x(size);
    for (int a = 0; a < size; ++a) x[a] = 0.5 * (blk.lo[a] + blk.hi[a]);
    const Fields f = blk.eval(x, 0);
    const Eigen::MatrixXd h = values(f.g), L = values(f.A);
    const double rho = x[size - 1];
    const JordanFrame fr = jordan_canonical_basis(h, L, rho);
    // canonical: N e_1 = 0, h(e_1, e_k) = 1, h(e_k, e_k) = 0[, h(e_2, e_2) = eps]
    const Eigen::MatrixXd N = L - rho * Eigen::MatrixXd::Identity(size, size);
    const Eigen::VectorXd e1 = fr.E.col(0), ek = fr.E.col(size - 1);
    CHECK((N * e1).norm() < 1e-10);
    CHECK(e1.dot(h * ek) == doctest::Approx(1.0));
    CHECK(std::abs(ek.dot(h * ek)) < 1e-10);
    if (size == 3) CHECK(fr.E.col(1).dot(h * fr.E.col(1)) == doctest::Approx(fr.eps));
    const Eigen::VectorXd top = fr.E.col(size - 1);
    const double a0 = jordan_alpha(fr, L, rho, top);
    CHECK(std::isfinite(a0));
    for (double t : {-1.3, 0.7, 2.1}) CHECK(jordan_alpha(fr, L, rho, top + t * fr.E.col(0)) == doctest::Approx(a0));
  }
}

TEST_CASE("curvature eigenvalue blows up at the predicted rate") {
  for (int size : {2, 3}) {
    const JordanOdeSolution s = solve_jordan_odes(inst::jordan_ode(size));
    const double rho2 = 0.6;
    const double F2 = ScalarFn::power_law(1.0, -0.5, 1.0 + 1.0 + size - 0.5)(rho2);
    const BlowupScan b = blowup_jordan(size, s.F.as_function("F"), 0.3, {rho2}, {F2});
    INFO("size " << size << " exponent " << b.exponent);
    CHECK(b.exponent == doctest::Approx(size == 2 ? 3.0 : 2.0).epsilon(0.03));
    CHECK(b.monotone);
  }
}
