#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cpg/vandermonde.hpp"

using namespace cpg;

namespace {

// Leibniz expansion, independent of any factorization.
double leibniz(const std::vector<std::vector<double>>& m) {
  const int n = static_cast<int>(m.size());
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  double det = 0.0;
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inv += p[i] > p[j];
    double t = inv % 2 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) t *= m[i][p[i]];
    det += t;
  } while (std::next_permutation(p.begin(), p.end()));
  return det;
}

// Bordered Vandermonde quotient built from scratch.
double brute_quotient(const std::vector<KFn>& k, const std::vector<double>& rho) {
  const int l = static_cast<int>(rho.size());
  std::vector<std::vector<double>> top(l, std::vector<double>(l)), vdm = top;
  for (int j = 0; j < l; ++j) {
    top[0][j] = k[j](rho[j]);
    for (int r = 1; r < l; ++r) top[r][j] = std::pow(rho[j], r - 1);
    for (int r = 0; r < l; ++r) vdm[r][j] = std::pow(rho[j], r);
  }
  // moving the k row to the bottom gives the sign (-1)^(l-1)
  return (l % 2 ? 1.0 : -1.0) * leibniz(top) / leibniz(vdm);
}

std::vector<double> random_tuple(std::mt19937_64& rng, int l) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    std::vector<double> r(l);
    for (auto& x : r) x = u(rng);
    std::sort(r.begin(), r.end());
    bool ok = true;
    for (int i = 1; i < l; ++i) ok = ok && r[i] - r[i - 1] > 0.05;
    if (ok) return r;
  }
}

}  // namespace

TEST_CASE("sum over Delta equals the Vandermonde quotient (brute-force determinants)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int l = 1; l <= 4; ++l)
    for (int trial = 0; trial < 10; ++trial) {
      const auto rho = random_tuple(rng, l);
      std::vector<KFn> k;
      for (int i = 0; i < l; ++i) {
        const double a = u(rng), b = u(rng);
        k.push_back([a, b](double x) { return std::exp(a * x) + b * std::cos(x); });
      }
      const double s = sum_over_delta(k, rho);
      INFO("l " << l);
      CHECK(std::abs(s - det_quotient(k, rho)) <= 1e-11 * (1.0 + std::abs(s)));
      CHECK(std::abs(s - brute_quotient(k, rho)) <= 1e-10 * (1.0 + std::abs(s)));
    }
}

TEST_CASE("low powers are annihilated, t^(l-1) gives 1") {
  std::mt19937_64 rng(12);
  for (int l = 2; l <= 4; ++l) {
    const auto rho = random_tuple(rng, l);
    for (int p = 0; p <= l - 2; ++p)
      CHECK(std::abs(sum_over_delta({[p](double x) { return std::pow(x, p); }}, rho)) < 1e-12);
    CHECK(sum_over_delta({[l](double x) { return std::pow(x, l - 1); }}, rho) == doctest::Approx(1.0).epsilon(1e-11));
  }
}

TEST_CASE("collision limit is the scaled derivative") {
  const ScalarFn F = ScalarFn::polynomial({0.2, 0.1, -0.3, 0.7, 0.4});
  const KFn k = [&](double t) { return F(t); };
  for (int l = 1; l <= 4; ++l) {
    std::vector<double> rho;
    for (int i = 0; i < l; ++i) rho.push_back(0.4 + 1e-3 * i);
    const double near = sum_over_delta({k}, rho);
    CHECK(near == doctest::Approx(collision_limit(F, 0.4 + 1e-3 * (l - 1) / 2.0, l)).epsilon(1e-5));
  }
}

TEST_CASE("tuples must be strictly increasing and separated") {
  CHECK_THROWS_AS(check_tuple({0.1, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(check_tuple({0.3, 0.1}), std::invalid_argument);
  CHECK_NOTHROW(check_tuple({0.1, 0.3}));
  CHECK_THROWS_AS(collision_limit(ScalarFn::polynomial({1.0}), 0.5, 5), std::invalid_argument);
}

TEST_CASE("admissible C windows: (-2, 1 - l), empty from l = 3") {
  for (int l = 1; l <= 3; ++l) {
    const CWindow w = admissible_window(l);
    INFO("l " << l << " window " << w.lower << " " << w.upper);
    CHECK(std::abs(w.lower + 2.0) < 0.05);
    CHECK(std::abs(w.upper - (1.0 - l)) < 0.05);
    CHECK(w.empty() == (l >= 3));
  }
  // inside the window the corner limits vanish, outside they do not
  CHECK(corner_scan(1, -1.0, 0.0).to_zero);
  CHECK(corner_scan(1, -1.0, 1.0).to_zero);
  CHECK_FALSE(corner_scan(1, -2.5, 0.0).to_zero);
  CHECK_FALSE(corner_scan(1, 0.5, 1.0).to_zero);
}
