#include "cpg/vandermonde.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cpg {

void check_tuple(const std::vector<double>& rho, double gap) {
  if (rho.empty()) throw std::invalid_argument("empty eigenvalue tuple");
  double m = 0.0;
  for (double r : rho) m = std::max(m, std::abs(r));
  for (std::size_t i = 1; i < rho.size(); ++i)
    if (!(rho[i] - rho[i - 1] > gap * (1.0 + m)))
      throw std::invalid_argument("eigenvalue tuple not strictly increasing above the gap threshold");
}

namespace {

const KFn& pick(const std::vector<KFn>& k, std::size_t i) {
  if (k.size() == 1) return k[0];
  return k.at(i);
}

void check_functions(const std::vector<KFn>& k, std::size_t l) {
  if (k.size() != 1 && k.size() != l) throw std::invalid_argument("need one function or one per eigenvalue");
}

}  // namespace

double sum_over_delta(const std::vector<KFn>& k, const std::vector<double>& rho, double gap) {
  check_tuple(rho, gap);
  check_functions(k, rho.size());
  double f = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    double d = 1.0;
    for (std::size_t j = 0; j < rho.size(); ++j)
      if (j != i) d *= rho[i] - rho[j];
    f += pick(k, i)(rho[i]) / d;
  }
  return f;
}

double det_quotient(const std::vector<KFn>& k, const std::vector<double>& rho, double gap) {
  check_tuple(rho, gap);
  check_functions(k, rho.size());
  const int l = static_cast<int>(rho.size());
  Eigen::MatrixXd top(l, l), bottom(l, l);
  for (int j = 0; j < l; ++j) {
    for (int r = 0; r < l - 1; ++r) top(r, j) = bottom(r, j) = std::pow(rho[j], r);
    top(l - 1, j) = pick(k, j)(rho[j]);
    bottom(l - 1, j) = std::pow(rho[j], l - 1);
  }
  return top.partialPivLu().determinant() / bottom.partialPivLu().determinant();
}

double collision_limit(const ScalarFn& k, double x, int ell) {
  if (ell < 1 || ell > 4) throw std::invalid_argument("collision limits are supported for 1 <= l <= 4");
  static const double fact[] = {1.0, 1.0, 2.0, 6.0};
  return k.derivs(x)[ell - 1] / fact[ell - 1];
}

CornerScan corner_scan(int ell, double C, double corner, double a, int decades, int per_decade) {
  if (ell < 1) throw std::invalid_argument("l must be positive");
  if (corner != 0.0 && corner != 1.0) throw std::invalid_argument("corner is 0 or 1");
  const ScalarFn F = ScalarFn::power_law(a, C, 1.0 + ell + C);
  const std::vector<KFn> k{[&](double t) { return F(t); }};
  CornerScan s;
  for (int n = 0; n <= decades * per_decade; ++n) {
    const double d = std::pow(10.0, -2.0 - static_cast<double>(n) / per_decade);
    std::vector<double> rho(ell);
    for (int i = 0; i < ell; ++i) rho[i] = corner == 0.0 ? d * (i + 1) : 1.0 - d * (ell - i);
    s.distance.push_back(d);
    s.value.push_back(sum_over_delta(k, rho, 0.0));
  }
  // slope of ln|f| against ln d over the last decade
  const int n = static_cast<int>(s.value.size());
  const int k0 = std::max(0, n - per_decade - 1);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = k0; i < n; ++i) {
    const double x = std::log(s.distance[i]), y = std::log(std::abs(s.value[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const int m = n - k0;
  s.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  s.to_zero = s.exponent > 0.0;
  return s;
}

CWindow admissible_window(int ell, double search_lo, double search_hi, double tol) {
  // corner 0 admits large C, corner 1 admits small C; each switches exactly once on the search range
  auto bisect = [&](double corner) {
    double lo = search_lo, hi = search_hi;
    const bool lo_ok = corner_scan(ell, lo, corner).to_zero;
    if (lo_ok == corner_scan(ell, hi, corner).to_zero)
      throw std::runtime_error("no switch of the corner limit on the search range");
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (corner_scan(ell, mid, corner).to_zero == lo_ok ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  CWindow w;
  w.lower = bisect(0.0);
  w.upper = bisect(1.0);
  return w;
}

}  // namespace cpg
