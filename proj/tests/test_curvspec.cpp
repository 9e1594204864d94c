#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cpg/curvspec.hpp"
#include "cpg/flows.hpp"
#include "instances.hpp"

using namespace cpg;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const GridSpec kGrid{2, 8, 8};

std::vector<double> mid(const Chart& c) {
  std::vector<double> x(c.dim);
  for (int a = 0; a < c.dim; ++a) x[a] = 0.5 * (c.lo[a] + c.hi[a]);
  return x;
}

MatrixXd poly_of(const std::vector<double>& c, const MatrixXd& A) {
  MatrixXd out = MatrixXd::Zero(A.rows(), A.cols()), P = MatrixXd::Identity(A.rows(), A.cols());
  for (double a : c) {
    out += a * P;
    P = P * A;
  }
  return out;
}

// Diagonalizable A with the given spectrum in a random basis.
MatrixXd with_spectrum(const std::vector<double>& ev, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = static_cast<int>(ev.size());
  MatrixXd P = MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) P(i, j) += 0.4 * u(rng);
  VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = ev[i];
  return P * d.asDiagonal() * P.inverse();
}

// A + eps x_0^2 Id: same curvature, different nabla Lambda.
Chart perturbed_A(Chart c, double eps) {
  auto inner = c.eval;
  c.eval = [inner, eps](const std::vector<double>& x, int order) {
    Fields f = inner(x, order);
    const JVec s = seeds(x, order);
    for (int a = 0; a < f.A.rows(); ++a) f.A(a, a) = f.A(a, a) + eps * s[0] * s[0];
    return f;
  };
  return c;
}

}  // namespace

TEST_CASE("J-wedges lie in u(g, J) and curvature maps them there") {
  const Chart c = lift_nonconstant(inst::two_real());
  Point p(c, mid(c), 2);
  const MatrixXd g = values(p.f().g), J = values(p.f().J);
  const int n = c.dim;
  double wedge_def = 0.0, image_def = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const MatrixXd X = wedge_J(VectorXd::Unit(n, a), VectorXd::Unit(n, b), g, J);
      const auto m = skew_hermitian_defect(X, g, J);
      wedge_def = std::max({wedge_def, m.skew, m.commutes});
      const auto r = skew_hermitian_defect(curvature_operator(p, X), g, J);
      image_def = std::max({image_def, r.skew, r.commutes});
    }
  CHECK(wedge_def < 1e-12);
  CHECK(image_def < 1e-8);
  const MatrixXd W = wedge(VectorXd::Unit(n, 0), VectorXd::Unit(n, 2), g);
  CHECK(skew_hermitian_defect(W, g, J).skew < 1e-12);
}

TEST_CASE("polynomial fit recovers p from p(A); R0 solves the commutator equation") {
  std::mt19937_64 rng(7);
  const MatrixXd A = with_spectrum({0.2, 0.9, 1.7, 2.5}, rng);
  const std::vector<double> c{0.3, -0.5, 0.25, 0.1};
  const PolyFit f = fit_nabla_lambda_poly(poly_of(c, A), A, 5);
  CHECK(f.ok);
  REQUIRE(f.coeffs.size() == c.size());
  for (std::size_t k = 0; k < c.size(); ++k) CHECK(f.coeffs[k] == doctest::Approx(c[k]).epsilon(1e-8));
  CHECK(f(0.7) == doctest::Approx(0.3 - 0.35 + 0.25 * 0.49 + 0.1 * 0.343));
  CHECK(f.derivative(0.7) == doctest::Approx(-0.5 + 0.5 * 0.7 + 0.3 * 0.49));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MatrixXd X(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) X(i, j) = u(rng);
  CHECK(r0_consistency(c, A, X) < 1e-12);
  // a non-commuting N is not a polynomial in A
  CHECK_FALSE(fit_nabla_lambda_poly(X, A, 5).ok);
}

TEST_CASE("eigenvalue clusters see Jordan blocks; predictions follow divided differences") {
  MatrixXd A = MatrixXd::Zero(4, 4);
  A(0, 0) = A(1, 1) = 2.0;
  A(0, 1) = 1.0;
  A(2, 2) = 0.5;
  A(3, 3) = -1.0;
  const auto cl = real_eigen_clusters(A);
  REQUIRE(cl.size() == 3);
  int jordan = 0;
  for (const auto& k : cl)
    if (k.jordan()) {
      ++jordan;
      CHECK(k.value == doctest::Approx(2.0));
      CHECK(k.algebraic == 2);
      CHECK(k.geometric == 1);
    }
  CHECK(jordan == 1);
  PolyFit f;
  f.coeffs = {0.0, 1.0, 0.0, 1.0};  // t + t^3
  const auto pred = predicted_eigenvalues(f, cl, 4.0);
  CHECK(pred.size() == 4);
  for (const auto& p : pred) {
    const double a = cl[p.i].value, b = cl[p.j].value;
    const double want = p.i == p.j ? 4.0 * (1.0 + 3.0 * a * a) : 4.0 * ((a + a * a * a) - (b + b * b * b)) / (a - b);
    CHECK(p.value == doctest::Approx(want));
  }
}

TEST_CASE("Ricci identity and spectra on lifts and pairs; a perturbed A is detected") {
  const std::vector<Chart> charts{lift_nonconstant(inst::two_real()),
                                  build_quotient_pair(inst::two_real(-1)),
                                  lift_with_constant_block(inst::one_real(), inst::zero_one_blocks(), 0.5)};
  for (const Chart& c : charts) {
    const ResidualReport r = inst::run(c, kGrid, 2, [](SampleBatch& b) {
      ResidualReport out = ricci_identity_check(b, 1e-6);
      out.append(spectrum_check(b, 1e-5));
      return out;
    });
    for (const auto& e : r.entries) {
      INFO(c.name << " " << e.name << " " << e.residual << " " << e.note);
      CHECK(e.pass);
    }
  }
  const Chart bad = perturbed_A(lift_nonconstant(inst::two_real()), 0.05);
  CHECK_FALSE(inst::run(bad, kGrid, 2, [](SampleBatch& b) { return ricci_identity_check(b, 1e-6); }).pass());
}

TEST_CASE("numeric quotient spectrum over 4 matches lambda of the two eigenvalues") {
  const Chart c = lift_nonconstant(inst::two_real());
  const std::vector<double> x = mid(c);
  Point p(c, x, 2);
  const SpectrumMatch m = compare_with_numeric(p);
  REQUIRE(m.predicted.size() == 1);
  CHECK(m.max_error < 1e-6);
  // the matched quotient eigenvalue is real
  CHECK(std::abs(m.numeric[0].imag()) < 1e-8);
}

TEST_CASE("collision limit of lambda and the third-order equation") {
  const ScalarFn F = ScalarFn::polynomial({0.1, -0.4, 0.3, 1.0, 0.5});
  const FpppLimit l = fppp_limit(F, 0.5, 1e-2);
  CHECK(l.exact == doctest::Approx((6.0 + 12.0 * 0.5) / 24.0));
  CHECK(l.error < 1e-3);
  // a quartic has no truncation error; a power law shows the Richardson gain
  const FpppLimit w = fppp_limit(ScalarFn::power_law(1.0, -0.5, 2.5), 0.5, 1e-2);
  CHECK(w.error < 1e-3);
  CHECK(w.error < 0.1 * std::abs(w.lambda_delta - w.exact));
  const Chart c = build_final_metric(0.7, inst::zero_one_blocks(1), false, 0.2, 0.8);
  const ResidualReport r = inst::run(c, kGrid, 3, [](SampleBatch& b) { return third_order_residual(b, 0.7, 1e-6); });
  CHECK(r.pass());
  CHECK_FALSE(
      inst::run(c, kGrid, 3, [](SampleBatch& b) { return third_order_residual(b, 0.9, 1e-6); }).pass());
}
