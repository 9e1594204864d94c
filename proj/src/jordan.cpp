#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "cpg/builders.hpp"
#include "cpg/geometry.hpp"

namespace cpg {
namespace odeint = boost::numeric::odeint;

QuinticSpline::QuinticSpline(std::vector<double> x, std::vector<double> y, std::vector<double> dy,
                             std::vector<double> d2y)
    : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)), d2y_(std::move(d2y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n || dy_.size() != n || d2y_.size() != n)
    throw std::invalid_argument("quintic spline needs matching node data, at least two nodes");
  for (std::size_t k = 1; k < n; ++k)
    if (!(x_[k] > x_[k - 1])) throw std::invalid_argument("spline nodes must increase");
}

ScalarFn::Derivs QuinticSpline::derivs(double t) const {
  if (x_.empty()) throw std::logic_error("empty spline");
  if (t < x_.front() || t > x_.back())
    throw DomainError("spline evaluated outside [" + std::to_string(x_.front()) + ", " +
                      std::to_string(x_.back()) + "]");
  std::size_t k = std::upper_bound(x_.begin(), x_.end(), t) - x_.begin();
  k = std::clamp<std::size_t>(k, 1, x_.size() - 1) - 1;
  const double h = x_[k + 1] - x_[k], s = (t - x_[k]) / h;
  const double c0 = y_[k], c1 = h * dy_[k], c2 = 0.5 * h * h * d2y_[k];
  const double R0 = y_[k + 1] - c0 - c1 - c2;
  const double R1 = h * dy_[k + 1] - c1 - 2.0 * c2;
  const double R2 = h * h * d2y_[k + 1] - 2.0 * c2;
  const double c3 = 10.0 * R0 - 4.0 * R1 + 0.5 * R2;
  const double c4 = -15.0 * R0 + 7.0 * R1 - R2;
  const double c5 = 6.0 * R0 - 3.0 * R1 + 0.5 * R2;
  const double p0 = c0 + s * (c1 + s * (c2 + s * (c3 + s * (c4 + s * c5))));
  const double p1 = c1 + s * (2 * c2 + s * (3 * c3 + s * (4 * c4 + s * 5 * c5)));
  const double p2 = 2 * c2 + s * (6 * c3 + s * (12 * c4 + s * 20 * c5));
  const double p3 = 6 * c3 + s * (24 * c4 + s * 60 * c5);
  return {p0, p1 / h, p2 / (h * h), p3 / (h * h * h)};
}

ScalarFn QuinticSpline::as_function(std::string description) const {
  auto self = std::make_shared<QuinticSpline>(*this);
  return ScalarFn([self](double t) { return self->derivs(t); }, std::move(description));
}

std::vector<QuinticSpline> JordanOdeSolution::components() const {
  if (spec.size == 3) return {F, G1, H1};
  return {F, G1};
}

namespace {

// Right-hand sides in the eigenvalue variable, generic over double and Jet.
// size 1: (F); size 2: (F, G1); size 3: (F, G1, H1).
template <class T>
std::vector<T> block_rhs(int size, int n, double C, const T& r, const std::vector<T>& y) {
  const T den = r * (1.0 - r);
  if (size == 1) return {y[0] * ((n + 1.0 + C) - (n + 1.0) * r) / den};
  if (size == 2)
    return {(0.5 * ((n - 1.0) * r - 1.0 - C - n) * y[0] - y[1]) / den, 0.5 * (n - 1.0) * y[0]};
  return {-(0.5 * (C + n + (4.0 - n) * r) * y[0] + 2.0 * y[2]) / den, y[1] * 0.0,
          0.5 * (n - 2.0) * y[0] - y[1]};
}

struct NodeData {
  std::vector<double> x;
  std::vector<std::vector<double>> y, dy, d2y;  // [component][node]
};

NodeData integrate_nodes(int size, int n, double C, double rho0, const std::vector<double>& init,
                         double lo, double hi, int nodes, double tol) {
  const int m = static_cast<int>(init.size());
  if (m != size) throw std::invalid_argument("initial state has the wrong length");
  if (nodes < 2) throw std::invalid_argument("need at least two nodes");
  if (!(0.0 < lo && lo <= rho0 && rho0 <= hi && hi < 1.0))
    throw std::invalid_argument("need 0 < rho_lo <= rho0 <= rho_hi < 1");
  NodeData out;
  for (int k = 0; k < nodes; ++k) out.x.push_back(lo + (hi - lo) * k / (nodes - 1.0));
  out.y.assign(m, std::vector<double>(nodes));
  out.dy = out.y;
  out.d2y = out.y;
  auto sys = [&](const std::vector<double>& y, std::vector<double>& dy, double r) {
    dy = block_rhs<double>(size, n, C, r, y);
  };
  auto store = [&](int k, const std::vector<double>& y) {
    // y'' = d_rho f + (d_y f) f through first-order jets in (rho, y)
    JVec yj;
    for (int i = 0; i < m; ++i) yj.push_back(Jet::seed(1 + i, y[i], 1 + m, 1));
    const Jet rj = Jet::seed(0, out.x[k], 1 + m, 1);
    const JVec f = block_rhs<Jet>(size, n, C, rj, yj);
    for (int i = 0; i < m; ++i) {
      out.y[i][k] = y[i];
      out.dy[i][k] = f[i].value();
      double s = f[i].d(0);
      for (int j = 0; j < m; ++j) s += f[i].d(1 + j) * f[j].value();
      out.d2y[i][k] = s;
    }
  };
  std::vector<double> up{rho0}, down{rho0};
  std::vector<int> up_idx, down_idx;
  for (int k = 0; k < nodes; ++k) {
    if (out.x[k] >= rho0) {
      up.push_back(out.x[k]);
      up_idx.push_back(k);
    } else {
      down_idx.push_back(k);
    }
  }
  std::reverse(down_idx.begin(), down_idx.end());
  for (int k : down_idx) down.push_back(out.x[k]);
  auto run = [&](const std::vector<double>& ts, const std::vector<int>& idx, double dt) {
    if (idx.empty()) return;
    std::vector<double> y = init;
    int seen = -1;  // the first observation is the start point itself
    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<std::vector<double>>());
    odeint::integrate_times(stepper, sys, y, ts.begin(), ts.end(), dt,
                            [&](const std::vector<double>& s, double) {
                              if (seen >= 0) store(idx[seen], s);
                              ++seen;
                            });
  };
  run(up, up_idx, 1e-3);
  run(down, down_idx, -1e-3);
  return out;
}

QuinticSpline spline_of(const NodeData& d, int i) { return {d.x, d.y[i], d.dy[i], d.d2y[i]}; }

// v1 = G d_x (+ H d_x2) + rho (1 - rho) d_rho on the Jordan coordinates starting at `o`.
void jordan_field(const JordanOdeSolution& s, const ScalarFn& G1, const ScalarFn& H1, const JVec& q,
                  int o, JVec& v) {
  const int n2 = s.spec.n2;
  const double C = s.spec.C;
  if (s.spec.size == 2) {
    const Jet& x = q[o];
    const Jet& r = q[o + 1];
    v[o] = 0.5 * ((n2 - 1.0) * r - 1.0 - C - n2) * x + G1(r);
    v[o + 1] = r * (1.0 - r);
  } else {
    const Jet& x1 = q[o];
    const Jet& x2 = q[o + 1];
    const Jet& r = q[o + 2];
    v[o] = 0.5 * (n2 * r - 2.0 - C - n2) * x1 + 0.5 * n2 * x2 + G1(r);
    v[o + 1] = 0.5 * ((n2 - 4.0) * r - C - n2) * x2 + H1(r);
    v[o + 2] = r * (1.0 - r);
  }
}

void check_size(const JordanOdeSpec& s) {
  if (s.size != 2 && s.size != 3) throw std::invalid_argument("Jordan blocks have size 2 or 3");
  if (s.n2 < 0) throw std::invalid_argument("n2 must be nonnegative");
}

}  // namespace

JordanOdeSolution solve_jordan_odes(const JordanOdeSpec& spec) {
  check_size(spec);
  const NodeData d = integrate_nodes(spec.size, spec.n2, spec.C, spec.rho0, spec.init, spec.rho_lo,
                                     spec.rho_hi, spec.nodes, spec.tol);
  JordanOdeSolution s;
  s.spec = spec;
  s.F = spline_of(d, 0);
  s.G1 = spline_of(d, 1);
  if (spec.size == 3) s.H1 = spline_of(d, 2);
  const int size = spec.size, n = spec.n2;
  const double C = spec.C;
  s.rhs = [size, n, C](double r, const std::vector<double>& y) {
    return block_rhs<double>(size, n, C, r, y);
  };
  return s;
}

QuinticSpline solve_scalar_ode(int n, double C, double rho0, double F0, double lo, double hi,
                               int nodes, double tol) {
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  return spline_of(integrate_nodes(1, n, C, rho0, {F0}, lo, hi, nodes, tol), 0);
}

OdeResidual jordan_ode_residual(const JordanOdeSolution& s, int per_interval) {
  if (per_interval < 1) throw std::invalid_argument("need at least one point per interval");
  const auto comps = s.components();
  const auto& x = s.F.nodes();
  OdeResidual out;
  double gmin = INFINITY, gmax = -INFINITY;
  for (std::size_t k = 0; k + 1 < x.size(); ++k)
    for (int m = 1; m <= per_interval; ++m) {
      const double r = x[k] + (x[k + 1] - x[k]) * m / (per_interval + 1.0);
      std::vector<double> y, dy;
      for (const auto& c : comps) {
        const auto d = c.derivs(r);
        y.push_back(d[0]);
        dy.push_back(d[1]);
      }
      const auto f = s.rhs(r, y);
      for (std::size_t i = 0; i < y.size(); ++i)
        out.residual = std::max(out.residual, rel(std::abs(dy[i] - f[i]), std::abs(f[i])));
      gmin = std::min(gmin, y[1]);
      gmax = std::max(gmax, y[1]);
      ++out.samples;
    }
  out.g1_spread = gmax - gmin;
  return out;
}

Chart build_jordan_block(const JordanOdeSolution& ode, const std::vector<double>& lo,
                         const std::vector<double>& hi) {
  check_size(ode.spec);
  const int m = ode.spec.size;
  if (static_cast<int>(lo.size()) != m || static_cast<int>(hi.size()) != m)
    throw std::invalid_argument("Jordan window dimension");
  if (lo[m - 1] < ode.F.lo() || hi[m - 1] > ode.F.hi())
    throw std::invalid_argument("rho window exceeds the solved interval");
  PairSpec p;
  p.blocks.push_back(JordanBlock{m, ode.F.as_function("F (ODE solution)")});
  p.lo = lo;
  p.hi = hi;
  Chart c = build_quotient_pair(p);
  c.name = "jordan-block";
  const ScalarFn G1 = ode.G1.as_function("G1");
  const ScalarFn H1 = m == 3 ? ode.H1.as_function("H1") : ScalarFn();
  auto base = c.eval;
  c.eval = [base, ode, G1, H1](const std::vector<double>& x, int order) {
    Fields f = base(x, order);
    const JVec q = seeds(x, order);
    JVec v(q.size(), q[0] * 0.0);
    jordan_field(ode, G1, H1, q, 0, v);
    f.v = v;
    return f;
  };
  return c;
}

Chart build_jordan_pair(const JordanChartSpec& spec) {
  const JordanOdeSolution& ode = spec.ode;
  check_size(ode.spec);
  const int m = ode.spec.size, n2 = ode.spec.n2;
  if (static_cast<int>(spec.a.size()) != n2)
    throw std::invalid_argument("need one weight per additional eigenvalue");
  if (static_cast<int>(spec.lo.size()) != m + n2 || static_cast<int>(spec.hi.size()) != m + n2)
    throw std::invalid_argument("Jordan pair window dimension");
  if (spec.lo[m - 1] < ode.F.lo() || spec.hi[m - 1] > ode.F.hi())
    throw std::invalid_argument("rho window exceeds the solved interval");
  const double C = ode.spec.C;
  const double l = n2 + 1.0;
  PairSpec p;
  p.blocks.push_back(JordanBlock{m, ode.F.as_function("F (ODE solution)")});
  for (double a : spec.a) {
    if (a == 0.0) throw std::invalid_argument("a_i must be nonzero");
    p.blocks.push_back(RhoBlock{ScalarFn::power_law(a, C, l + m + C)});
  }
  p.lo = spec.lo;
  p.hi = spec.hi;
  for (int i = m - 1; i < m + n2; ++i)
    if (!(0.0 < p.lo[i] && p.hi[i] < 1.0)) throw std::invalid_argument("rho window must lie inside (0, 1)");
  Chart c = build_quotient_pair(p);
  c.name = "jordan-pair";
  if (!spec.with_field) return c;
  const ScalarFn G1 = ode.G1.as_function("G1");
  const ScalarFn H1 = m == 3 ? ode.H1.as_function("H1") : ScalarFn();
  auto base = c.eval;
  c.eval = [base, ode, G1, H1, m](const std::vector<double>& x, int order) {
    Fields f = base(x, order);
    const JVec q = seeds(x, order);
    JVec v(q.size(), q[0] * 0.0);
    jordan_field(ode, G1, H1, q, 0, v);
    for (std::size_t i = m; i < q.size(); ++i) v[i] = q[i] * (1.0 - q[i]);
    f.v = v;
    return f;
  };
  return c;
}

}  // namespace cpg
