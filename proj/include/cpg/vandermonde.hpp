#pragma once

#include <functional>
#include <vector>

#include "cpg/builders.hpp"

namespace cpg {

using KFn = std::function<double(double)>;

// Throws std::invalid_argument unless rho is strictly increasing with gaps above gap (1 + max |rho|).
void check_tuple(const std::vector<double>& rho, double gap = 1e-8);

// f = sum k_i(rho_i) / prod_{j != i} (rho_i - rho_j)
double sum_over_delta(const std::vector<KFn>& k, const std::vector<double>& rho, double gap = 1e-8);
// The same f as a quotient of Vandermonde determinants: rows 1, rho, ..., rho^(l-2) bordered by
// k_i(rho_i) on top of the full Vandermonde determinant.
double det_quotient(const std::vector<KFn>& k, const std::vector<double>& rho, double gap = 1e-8);

// lim f at the diagonal (x, ..., x) for k_i = k: k^(l-1)(x) / (l-1)!, l <= 4.
double collision_limit(const ScalarFn& k, double x, int ell);

// f(rho) = sum F(rho_i) / Delta_i with F = a (1-t)^-C t^(1+l+C) along rho = corner -/+ d (1, ..., l).
struct CornerScan {
  std::vector<double> distance, value;
  double exponent = 0.0;  // f ~ d^exponent on the tail
  bool to_zero = false;   // exponent > 0
};
CornerScan corner_scan(int ell, double C, double corner, double a = 1.0, int decades = 4,
                       int per_decade = 4);

// C such that f tends to 0 at both corners, located by bisection on each corner separately.
struct CWindow {
  double lower = 0.0;  // corner 0 admits C > lower
  double upper = 0.0;  // corner 1 admits C < upper
  bool empty() const { return !(lower < upper); }
};
CWindow admissible_window(int ell, double search_lo = -3.7, double search_hi = 1.3, double tol = 1e-3);

}  // namespace cpg
