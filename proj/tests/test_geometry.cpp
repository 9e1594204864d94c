#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cpg/geometry.hpp"
#include "fd_oracle.hpp"

using namespace cpg;

namespace {

Chart chart_from(int dim, std::function<Fields(const JVec&)> f) {
  Chart c;
  c.dim = dim;
  c.kahler = false;
  c.lo.assign(dim, -1.0);
  c.hi.assign(dim, 1.0);
  c.eval = [f](const std::vector<double>& x, int order) { return f(seeds(x, order)); };
  return c;
}

JMat diag(const std::vector<Jet>& d) {
  JMat m = jzero(d.size(), d.size(), d[0]);
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Fields sphere(const JVec& x) {
  Fields f;
  Jet s = sin(x[0]);
  f.g = diag({Jet::constant(1.0, x[0].dim(), x[0].order()), s * s});
  return f;
}

}  // namespace

TEST_CASE("flat metric has vanishing connection and curvature") {
  Chart c = chart_from(3, [](const JVec& x) {
    Fields f;
    f.g = jidentity(3, x[0]);
    return f;
  });
  Point p(c, {0.1, 0.2, 0.3}, 2);
  for (const auto& g : gamma_of(p).c) CHECK(g.value() == 0.0);
  for (const auto& r : riemann_of(p).r) CHECK(r.value() == 0.0);
}

TEST_CASE("conformal plane Christoffels") {
  Chart c = chart_from(2, [](const JVec& x) {
    Fields f;
    Jet e = exp(2.0 * x[0]);
    f.g = diag({e, e});
    return f;
  });
  Point p(c, {0.3, -0.4}, 1);
  const auto& G = gamma_of(p);
  CHECK(G(0, 0, 0).value() == doctest::Approx(1.0));
  CHECK(G(0, 1, 1).value() == doctest::Approx(-1.0));
  CHECK(G(1, 0, 1).value() == doctest::Approx(1.0));
  CHECK(G(1, 1, 0).value() == doctest::Approx(1.0));
}

TEST_CASE("sphere chart: Christoffels vs finite differences, curvature 1") {
  Chart c = chart_from(2, sphere);
  const double x0 = M_PI / 4, y0 = 0.3;
  Point p(c, {x0, y0}, 2);
  const auto& G = gamma_of(p);
  // oracle: Gamma from finite-difference metric derivatives
  auto gfun = [&](int a, int b) {
    return [a, b, &c](const std::vector<double>& x) {
      return c.eval(x, 0).g(a, b).value();
    };
  };
  const double h = 1e-4;
  std::vector<double> x = {x0, y0};
  auto dg = [&](int k, int a, int b) { return fd::d1(gfun(a, b), x, k, h); };
  const double s2 = std::sin(x0) * std::sin(x0);
  double ginv[2] = {1.0, 1.0 / s2};
  for (int cc = 0; cc < 2; ++cc)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double v = 0.5 * ginv[cc] * (dg(a, b, cc) + dg(b, a, cc) - dg(cc, a, b));
        CHECK(G(cc, a, b).value() == doctest::Approx(v).epsilon(1e-8));
      }
  const auto& R = riemann_of(p);
  // K = R_{0101} / det g, with R_{abcd} lowered on the first index
  const double R0101 = 1.0 * R(0, 1, 0, 1).value();
  CHECK(R0101 / s2 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Bianchi identity and skew symmetry on a random metric") {
  Chart c = chart_from(3, [](const JVec& x) {
    Fields f;
    JMat g = jidentity(3, x[0]);
    g(0, 0) += 0.3 * sin(x[1]) * x[2];
    g(1, 1) += 0.2 * exp(x[0]) * x[2];
    g(2, 2) += 0.1 * x[0] * x[1];
    g(0, 1) = 0.2 * cos(x[2]) * x[0];
    g(1, 0) = g(0, 1);
    g(1, 2) = 0.15 * x[0] * x[0];
    g(2, 1) = g(1, 2);
    f.g = g;
    return f;
  });
  Point p(c, {0.3, -0.2, 0.5}, 2);
  const auto& R = riemann_of(p);
  const Eigen::MatrixXd g = values(p.f().g);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int cc = 0; cc < 3; ++cc)
        for (int d = 0; d < 3; ++d) {
          double bianchi = R(a, b, cc, d).value() + R(a, cc, d, b).value() + R(a, d, b, cc).value();
          CHECK(std::abs(bianchi) < 1e-10);
          double low1 = 0, low2 = 0;  // R_{eb cd} + R_{be cd} = 0
          for (int e = 0; e < 3; ++e) {
            low1 += g(a, e) * R(e, b, cc, d).value();
            low2 += g(b, e) * R(e, a, cc, d).value();
          }
          CHECK(std::abs(low1 + low2) < 1e-10);
        }
  const auto& G = gamma_of(p);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int cc = 0; cc < 3; ++cc) CHECK(G(a, b, cc).value() == G(a, cc, b).value());
}

TEST_CASE("covariant derivative of an endomorphism matches finite differences") {
  auto metric = [](const JVec& x) {
    JMat g = jidentity(2, x[0]);
    g(0, 0) += 0.5 * x[1] * x[1];
    g(1, 1) += 0.3 * sin(x[0]);
    g(0, 1) = 0.1 * x[0] * x[1];
    g(1, 0) = g(0, 1);
    return g;
  };
  auto endo = [](const JVec& x) {
    JMat A = jzero(2, 2, x[0]);
    A(0, 0) = x[0] * x[1] + 1.0;
    A(0, 1) = x[1] * x[1];
    A(1, 0) = x[0] - 2.0 * x[1];
    A(1, 1) = x[0] * x[0] * x[1];
    return A;
  };
  Chart c = chart_from(2, [&](const JVec& x) {
    Fields f;
    f.g = metric(x);
    f.A = endo(x);
    return f;
  });
  std::vector<double> x0 = {0.4, -0.3};
  Point p(c, x0, 1);
  auto nA = covariant_derivative_endo(p.f().A, gamma_of(p));
  // oracle: d_a A^b_c + Gamma^b_{ad} A^d_c - Gamma^d_{ac} A^b_d with FD Gamma
  const double h = 1e-4;
  auto gval = [&](const std::vector<double>& x) { return values(metric(seeds(x, 0))); };
  auto aval = [&](const std::vector<double>& x) { return values(endo(seeds(x, 0))); };
  auto dmat = [&](auto fun, int k) {
    auto xp = x0, xm = x0;
    xp[k] += h;
    xm[k] -= h;
    Eigen::MatrixXd r = (fun(xp) - fun(xm)) / (2 * h);
    return r;
  };
  Eigen::MatrixXd g = gval(x0), gi = g.inverse(), A = aval(x0);
  Eigen::MatrixXd dg[2] = {dmat(gval, 0), dmat(gval, 1)};
  Eigen::MatrixXd dA[2] = {dmat(aval, 0), dmat(aval, 1)};
  auto Gam = [&](int cc, int a, int b) {
    double s = 0;
    for (int d = 0; d < 2; ++d) s += 0.5 * gi(cc, d) * (dg[a](b, d) + dg[b](a, d) - dg[d](a, b));
    return s;
  };
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int cc = 0; cc < 2; ++cc) {
        double v = dA[a](b, cc);
        for (int d = 0; d < 2; ++d) v += Gam(b, a, d) * A(d, cc) - Gam(d, a, cc) * A(b, d);
        CHECK(nA[a](b, cc).value() == doctest::Approx(v).epsilon(1e-7));
      }
}

TEST_CASE("Lie derivatives: zero field, rotation, dilation") {
  Chart c = chart_from(2, [](const JVec& x) {
    Fields f;
    f.g = jidentity(2, x[0]);
    f.v = {-x[1], x[0]};
    return f;
  });
  Point p(c, {0.3, 0.7}, 1);
  auto L = lie_derivative_form(p.f().g, p.f().v);
  CHECK(max_abs(L) < 1e-15);
  JVec zero = {Jet::constant(0, 2, 1), Jet::constant(0, 2, 1)};
  CHECK(max_abs(lie_derivative_form(p.f().g, zero)) == 0.0);
  CHECK(max_abs(lie_derivative_endo(p.f().g, zero)) == 0.0);
  JVec dil = {seeds({0.3, 0.7}, 1)[0], Jet::constant(0, 2, 1)};
  auto D = lie_derivative_form(p.f().g, dil);
  CHECK(D(0, 0).value() == doctest::Approx(2.0));
  CHECK(D(0, 1).value() == 0.0);
  CHECK(D(1, 1).value() == 0.0);
  auto s = seeds({0.3, 0.7}, 1);
  JVec e0 = {Jet::constant(1, 2, 1), Jet::constant(0, 2, 1)};
  JVec e1 = {Jet::constant(0, 2, 1), Jet::constant(1, 2, 1)};
  auto br = lie_bracket(e0, e1);
  CHECK(br[0].value() == 0.0);
  CHECK(br[1].value() == 0.0);
}

TEST_CASE("exterior derivative and Hessian") {
  Chart c = chart_from(3, [](const JVec& x) {
    Fields f;
    f.g = jidentity(3, x[0]);
    f.omega = jzero(3, 3, x[0]);
    f.omega(0, 1) += 2.0;
    f.omega(1, 0) -= 2.0;
    return f;
  });
  Point p(c, {0.1, 0.2, 0.3}, 2);
  for (const auto& d : exterior_derivative_2form(p.f().omega)) CHECK(d.value() == 0.0);
  auto x = seeds({0.1, 0.2, 0.3}, 2);
  Jet f = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  auto H = hessian(f, gamma_of(p));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(H(a, b).value() == doctest::Approx(a == b ? 2.0 : 0.0));
}
