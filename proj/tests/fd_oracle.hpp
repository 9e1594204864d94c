#pragma once

// Central finite-difference oracle for tests. Never used by the library.

#include <cmath>
#include <functional>
#include <vector>

namespace fd {

using Fn = std::function<double(const std::vector<double>&)>;

inline double d1(const Fn& f, std::vector<double> x, int i, double h) {
  const double x0 = x[i];
  x[i] = x0 + h;
  const double fp = f(x);
  x[i] = x0 - h;
  const double fm = f(x);
  return (fp - fm) / (2.0 * h);
}

// Central derivative of a derived quantity along axis i.
inline Fn along(const Fn& f, int i, double h) {
  return [f, i, h](const std::vector<double>& x) { return d1(f, x, i, h); };
}

struct Convergence {
  double err_h;   // |oracle(h) - exact|
  double err_h2;  // |oracle(h/2) - exact|
  double order() const { return std::log2(err_h / err_h2); }
  // Either the truncation error is visible and shrinks at second order, or
  // both estimates agree with the exact value to rounding level.
  bool ok(double floor = 1e-9) const { return err_h <= floor || order() >= 1.9; }
};

inline Convergence check(const std::function<double(double)>& oracle, double exact, double h = 1e-3) {
  return {std::abs(oracle(h) - exact), std::abs(oracle(h / 2.0) - exact)};
}

}  // namespace fd
