#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cpg/kahler.hpp"
#include "fd_oracle.hpp"
#include "instances.hpp"

using namespace cpg;

namespace {

const GridSpec kGrid{3, 8, 1};

std::vector<double> mid(const Chart& c) {
  std::vector<double> x(c.dim);
  for (int a = 0; a < c.dim; ++a) x[a] = 0.5 * (c.lo[a] + c.hi[a]);
  return x;
}

// Conformal factor 1 + eps x_0^2 on g and omega: J stays, d omega != 0.
Chart conformal(Chart c, double eps) {
  auto inner = c.eval;
  c.eval = [inner, eps](const std::vector<double>& x, int order) {
    Fields f = inner(x, order);
    const JVec s = seeds(x, order);
    const Jet k = 1.0 + eps * s[0] * s[0];
    f.g = f.g * k;
    f.omega = f.omega * k;
    return f;
  };
  return c;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

}  // namespace

TEST_CASE("Kahler and c-projective residuals vanish on lifts") {
  for (const Chart& c : {lift_nonconstant(inst::two_real()), lift_nonconstant(inst::real_complex()),
                         lift_with_constant_block(inst::one_real(), {ConstantBlock{1.5, 2, {}}}, 0.5)}) {
    const ResidualReport r = inst::run(c, kGrid, 2, [](SampleBatch& b) {
      ResidualReport out = check_kahler(b, 1e-6);
      out.append(cproj_residual(b, 1e-6));
      out.append(hamiltonian_killing_check(b, 1e-6));
      out.append(connection_difference_check(b, 1e-6));
      return out;
    });
    for (const auto& e : r.entries) {
      INFO(c.name << " " << e.name << " " << e.residual);
      CHECK(e.pass);
      CHECK(e.samples > 0);
    }
  }
}

TEST_CASE("a seeded conformal defect is detected by d omega and nabla J") {
  const Chart c = conformal(lift_nonconstant(inst::two_real()), 0.01);
  const ResidualReport r = inst::run(c, kGrid, 2, [](SampleBatch& b) { return check_kahler(b, 1e-6); });
  CHECK_FALSE(r.pass());
  CHECK(r.residual("kahler.d_omega") > 1e-4);
  CHECK(r.residual("kahler.metric_hermitian") < 1e-10);
  CHECK(r.residual("kahler.omega_matches") < 1e-10);
}

TEST_CASE("projective residual on quotient pairs; non-selfadjoint L is refused") {
  const Chart c = build_quotient_pair(inst::two_real(-1));
  const ResidualReport r = inst::run(c, kGrid, 2, [](SampleBatch& b) { return proj_residual(b, 1e-6); });
  CHECK(r.pass());
  Chart bad = c;
  auto inner = c.eval;
  bad.eval = [inner](const std::vector<double>& x, int order) {
    Fields f = inner(x, order);
    f.A(0, 1) = f.A(0, 1) + 0.3;
    return f;
  };
  SampleBatch b(bad, kGrid, 2);
  CHECK_THROWS_AS(proj_residual(b, 1e-6), std::invalid_argument);
}

TEST_CASE("Lambda is a quarter gradient of tr A (finite differences)") {
  const Chart c = lift_nonconstant(inst::real_complex());
  const std::vector<double> x = mid(c);
  Point p(c, x, 2);
  const JVec& L = lambda_of(p);
  const Eigen::MatrixXd ginv = values(c.eval(x, 0).g).inverse();
  auto trA = [&](const std::vector<double>& y) { return values(c.eval(y, 0).A).trace(); };
  for (int a = 0; a < c.dim; ++a) {
    auto oracle = [&](double h) {
      double s = 0.0;
      for (int b = 0; b < c.dim; ++b) s += ginv(a, b) * fd::d1(trA, x, b, h);
      return 0.25 * s;
    };
    CHECK(fd::check(oracle, L[a].value()).ok());
  }
}

TEST_CASE("partner metric and recovery are inverse to each other") {
  const Chart c = lift_with_constant_block(inst::two_real(), {ConstantBlock{1.5, 2, {}}}, 0.5);
  Point p(c, mid(c), 1);
  const JMat ghat = partner_metric(p.f().g, p.f().A);
  const JMat A = recover_A(p.f().g, ghat);
  CHECK(max_abs(values(A) - values(p.f().A)) < 1e-12);
  // the partner metric is again hermitian
  const Eigen::MatrixXd gh = values(ghat), J = values(p.f().J);
  CHECK((J.transpose() * gh * J - gh).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(connection_difference_at(p, ghat) < 1e-10);
}

TEST_CASE("complex characteristic polynomial squares to the real one") {
  const Chart c = lift_with_constant_block(inst::real_complex(), {ConstantBlock{1.5, 2, {}}}, 0.5);
  Point p(c, mid(c), 1);
  const JVec cc = complex_charpoly(p.f().A), rc = charpoly(p.f().A);
  std::vector<double> h;
  for (const auto& j : cc) h.push_back(j.value());
  CHECK(h.back() == doctest::Approx(1.0));
  const auto sq = poly_mul(h, h);
  REQUIRE(sq.size() == rc.size());
  for (std::size_t k = 0; k < sq.size(); ++k) CHECK(sq[k] == doctest::Approx(rc[k].value()).epsilon(1e-10));
  CHECK(det_complex(p.f().A).value() * det_complex(p.f().A).value() ==
        doctest::Approx(values(p.f().A).determinant()).epsilon(1e-10));
}

TEST_CASE("non-constant eigenvalues, mu and their derivatives") {
  const Chart c = lift_with_constant_block(inst::two_real(), inst::zero_one_blocks(), 0.5);
  const std::vector<double> x = mid(c);
  Point p(c, x, 1);
  // coordinates t1 t2 x1 x2 y..: rho_1 = x1, rho_2 = 2 + x2
  const double r1 = x[2], r2 = 2.0 + x[3];
  const JVec& mu = mu_of(p);
  REQUIRE(mu.size() == 3);
  CHECK(mu[1].value() == doctest::Approx(r1 + r2));
  CHECK(mu[2].value() == doctest::Approx(r1 * r2));
  const auto& e = eigen_of(p);
  CHECK(e.regular);
  CHECK(e.values.size() == 2);
  for (int a = 0; a < c.dim; ++a) {
    auto mu1 = [&](const std::vector<double>& y) {
      Point q(c, y, 0);
      return mu_of(q)[1].value();
    };
    auto oracle = [&](double h) { return fd::d1(mu1, x, a, h); };
    CHECK(fd::check(oracle, mu[1].d(a)).ok());
  }
  const auto& ej = eigen_jets(p);
  double s = 0.0;
  for (const auto& z : ej) s += z.re.d(2);
  CHECK(s == doctest::Approx(mu[1].d(2)));
  CHECK(s == doctest::Approx(1.0));
}
