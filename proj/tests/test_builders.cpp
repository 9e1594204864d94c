#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cpg/builders.hpp"
#include "fd_oracle.hpp"
#include "instances.hpp"

using namespace cpg;

namespace {

std::vector<double> sorted_real_eigs(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  std::vector<double> v;
  for (int i = 0; i < m.rows(); ++i) {
    CHECK(std::abs(es.eigenvalues()[i].imag()) < 1e-6);
    v.push_back(es.eigenvalues()[i].real());
  }
  std::sort(v.begin(), v.end());
  return v;
}

double sym_defect(const Eigen::MatrixXd& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("scalar functions: derivatives match finite differences") {
  const ScalarFn p = ScalarFn::polynomial({0.1, -0.4, 0.3, 1.0, 0.5});
  const ScalarFn w = ScalarFn::power_law(1.3, -0.5, 2.5);
  for (const ScalarFn* f : {&p, &w})
    for (double t : {0.3, 0.55, 0.7}) {
      const auto d = f->derivs(t);
      for (int k = 1; k <= 3; ++k) {
        auto oracle = [&](double h) {
          const auto a = f->derivs(t + h), b = f->derivs(t - h);
          return (a[k - 1] - b[k - 1]) / (2.0 * h);
        };
        CHECK(fd::check(oracle, d[k]).ok());
      }
    }
}

TEST_CASE("power law raises outside (0, 1)") {
  const ScalarFn w = ScalarFn::power_law(1.0, -0.5, 2.5);
  CHECK_THROWS_AS(w(1.2), DomainError);
  CHECK_THROWS_AS(w(-0.1), DomainError);
}

TEST_CASE("quintic Hermite spline reproduces quintics") {
  const std::vector<double> c{0.3, -1.0, 0.5, 2.0, -0.7, 0.4};
  const ScalarFn q = ScalarFn::polynomial(c);
  std::vector<double> x, y, dy, d2y;
  for (int i = 0; i <= 6; ++i) {
    const double t = 0.1 + 0.8 * i / 6.0;
    const auto d = q.derivs(t);
    x.push_back(t);
    y.push_back(d[0]);
    dy.push_back(d[1]);
    d2y.push_back(d[2]);
  }
  const QuinticSpline s(x, y, dy, d2y);
  for (double t : {0.13, 0.37, 0.5, 0.81}) {
    const auto a = s.derivs(t), b = q.derivs(t);
    for (int k = 0; k < 4; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-10));
  }
}

TEST_CASE("quotient pair: L is h-selfadjoint with the block eigenvalues") {
  const Chart c = build_quotient_pair(inst::two_real(-1));
  CHECK(c.dim == 2);
  CHECK_FALSE(c.kahler);
  const std::vector<double> x{0.4, 0.1};
  const Fields f = c.eval(x, 0);
  const Eigen::MatrixXd h = values(f.g), L = values(f.A);
  CHECK(sym_defect(h) < 1e-14);
  CHECK(sym_defect(h * L) < 1e-13);
  const auto e = sorted_real_eigs(L);
  CHECK(e[0] == doctest::Approx(0.4));
  CHECK(e[1] == doctest::Approx(2.1));
  // h = eps_i Delta_i dx_i^2 with Delta_i = prod_(j != i) (rho_i - rho_j)
  CHECK(h(0, 0) == doctest::Approx(0.4 - 2.1));
  CHECK(h(1, 1) == doctest::Approx(-(2.1 - 0.4)));
  CHECK(std::abs(h(0, 1)) < 1e-14);
}

TEST_CASE("Kahler lift: complex structure, hermitian metric, doubled eigenvalues") {
  const Chart c = lift_nonconstant(inst::two_real());
  CHECK(c.dim == 4);
  CHECK(c.kahler);
  const std::vector<double> x = {0.5, 0.1, 0.3, -0.2};
  const Fields f = c.eval(x, 0);
  const Eigen::MatrixXd g = values(f.g), J = values(f.J), A = values(f.A), w = values(f.omega);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(4, 4);
  CHECK((J * J + I).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((J.transpose() * g * J - g).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((A * J - J * A).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((w - J.transpose() * g).cwiseAbs().maxCoeff() < 1e-12);  // omega_ab = J^c_a g_cb
  const auto e = sorted_real_eigs(A);
  CHECK(e[0] == doctest::Approx(e[1]));
  CHECK(e[2] == doctest::Approx(e[3]));
}

TEST_CASE("constant blocks add their eigenvalues with multiplicity") {
  const Chart c = lift_with_constant_block(inst::one_real(), inst::zero_one_blocks(), 0.5);
  CHECK(c.dim == 6);
  CHECK(c.ell == 1);
  REQUIRE(c.constants.size() == 2);
  std::vector<double> x(c.dim);
  for (int a = 0; a < c.dim; ++a) x[a] = 0.5 * (c.lo[a] + c.hi[a]);
  const auto e = sorted_real_eigs(values(c.eval(x, 0).A));
  CHECK(e[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(e[1] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(e[4] == doctest::Approx(1.0));
  CHECK(e[5] == doctest::Approx(1.0));
}

TEST_CASE("metric derivatives of the lift agree with finite differences") {
  const Chart c = lift_nonconstant(inst::two_real());
  const std::vector<double> x = {0.5, 0.1, 0.3, -0.2};
  const Fields f = c.eval(x, 1);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int k = 0; k < 4; ++k) {
        auto gab = [&](const std::vector<double>& y) { return c.eval(y, 0).g(a, b).value(); };
        auto oracle = [&](double h) { return fd::d1(gab, x, k, h); };
        CHECK(fd::check(oracle, f.g(a, b).d(k)).ok());
      }
}

TEST_CASE("windows violating the block hypotheses are rejected") {
  PairSpec s = inst::two_real();
  s.blocks[1] = RealBlock{1, {0.5, 1.0}};  // rho_2 = 0.5 + x_2 meets rho_1 = x_1
  CHECK_THROWS_AS(lift_nonconstant(s), std::invalid_argument);
  PairSpec z = inst::one_real();
  z.lo = {-0.2};  // constant eigenvalue 0 inside the range of rho
  CHECK_THROWS_AS(lift_with_constant_block(z, inst::zero_one_blocks(), 0.5), std::invalid_argument);
  PairSpec cx = inst::real_complex();
  cx.lo[2] = -0.1;  // complex eigenvalue crosses the real axis
  CHECK_THROWS_AS(lift_nonconstant(cx), std::invalid_argument);
}

TEST_CASE("mobility-2 field is reconstructed exactly") {
  for (bool k : {true, false}) {
    const Mobility2 m = build_mobility2(inst::mobility(-0.5, k));
    CHECK(m.fit_residual < 1e-10);
    CHECK(m.chart.kahler == k);
    CHECK(m.chart.dim == (k ? 6 : 3));
  }
}
