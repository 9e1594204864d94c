#include "cpg/flows.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cpg/geometry.hpp"
#include "cpg/kahler.hpp"

namespace cpg {
namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;
using Dense = odeint::dense_output_runge_kutta<
    odeint::controlled_runge_kutta<odeint::runge_kutta_dopri5<State>>>;

Dense make_dense(double tol) {
  return odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State>());
}

bool inside(const Chart& c, const std::vector<double>& x) {
  for (int a = 0; a < c.dim; ++a)
    if (x[a] < c.lo[a] || x[a] > c.hi[a]) return false;
  return true;
}

// Least-squares slope of ln|value| against ln(distance) over the last decade, negated.
double tail_exponent(const std::vector<double>& d, const std::vector<double>& v, int per_decade) {
  const int n = static_cast<int>(d.size());
  const int k0 = std::max(0, n - per_decade - 1);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int k = k0; k < n; ++k) {
    const double x = std::log(d[k]), y = std::log(std::abs(v[k]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void finish_scan(BlowupScan& s, int per_decade) {
  const int n = static_cast<int>(s.value.size());
  const int k0 = std::max(0, n - per_decade - 1);
  s.exponent = tail_exponent(s.distance, s.value, per_decade);
  double lo = s.value[k0], hi = s.value[k0];
  s.monotone = true;
  for (int k = k0 + 1; k < n; ++k) {
    lo = std::min(lo, s.value[k]);
    hi = std::max(hi, s.value[k]);
    if (!(std::abs(s.value[k]) > std::abs(s.value[k - 1]))) s.monotone = false;
  }
  s.tail_variation = hi - lo;
  s.diverges = s.monotone && s.exponent > 0.5;
}

std::vector<double> decade_path(int decades, int per_decade) {
  std::vector<double> d;
  for (int k = 0; k <= decades * per_decade; ++k)
    d.push_back(std::pow(10.0, -1.0 - static_cast<double>(k) / per_decade));
  return d;
}

}  // namespace

LieCoefficients canonical_coefficients(const Chart& chart, double C) {
  const int n = chart.kahler ? chart.dim / 2 : chart.dim;
  double cm = 0.0;
  for (const auto& c : chart.constants) cm += c.value * c.multiplicity;
  LieCoefficients k;
  k.beta = 1.0;
  k.gamma = 0.0;
  k.alpha = (C - cm) / (n + 1.0);
  k.delta = 1.0 + k.alpha;
  return k;
}

LieDefects lie_defects(const Fields& f, const JVec& v, const LieCoefficients& c, bool kahler) {
  const int N = f.g.rows();
  const int n = kahler ? N / 2 : N;
  const double k = kahler ? 0.5 : 1.0;
  const Eigen::MatrixXd A = values(f.A), g = values(f.g);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);
  const double trA = A.trace();
  LieDefects d;
  d.A = values(lie_derivative_endo(f.A, v)) -
        (-c.beta * A * A + (c.delta - c.alpha) * A + c.gamma * I);
  d.g = values(lie_derivative_form(f.g, v)) -
        ((-k * c.beta * trA - (n + 1) * c.alpha) * g - c.beta * g * A);
  const double a = max_abs(A);
  d.scale_A = a * (1.0 + a);
  d.scale_g = max_abs(g) * (1.0 + a + std::abs(trA));
  return d;
}

ResidualReport lie_residual_suite(SampleBatch& batch, const LieCoefficients& c, double tol) {
  const std::vector<std::string> names = {"lie.A_equation", "lie.g_equation"};
  const bool kahler = batch.chart().kahler;
  Tally t;
  for_each_point(batch, t, names, [&](Point& p, Tally& out) {
    if (p.f().v.empty()) throw std::invalid_argument("chart carries no vector field");
    const LieDefects d = lie_defects(p.f(), p.f().v, c, kahler);
    out.add(names[0], rel(max_abs(d.A), d.scale_A), p.x());
    out.add(names[1], rel(max_abs(d.g), d.scale_g), p.x());
  });
  return t.report(tol, {{names[0], "L_v A = -beta A^2 + (delta - alpha) A + gamma Id"},
                        {names[1], "L_v g = (-k beta tr A - (n+1) alpha) g - beta g A"}});
}

ResidualReport split_block_residual(SampleBatch& batch, int n2, double C, double tol) {
  const std::vector<std::string> names = {"split.L_equation", "split.h_equation"};
  Tally t;
  for_each_point(batch, t, names, [&](Point& p, Tally& out) {
    const Fields& f = p.f();
    if (f.v.empty()) throw std::invalid_argument("chart carries no vector field");
    const Eigen::MatrixXd L = values(f.A), h = values(f.g);
    const double trL = L.trace();
    const Eigen::MatrixXd dL = values(lie_derivative_endo(f.A, f.v)) - (L - L * L);
    const Eigen::MatrixXd dh = values(lie_derivative_form(f.g, f.v)) -
                               ((n2 - 1.0) * h * L - (trL + C + n2) * h);
    const double a = max_abs(L);
    out.add(names[0], rel(max_abs(dL), a * (1.0 + a)), p.x());
    out.add(names[1], rel(max_abs(dh), max_abs(h) * (1.0 + a + std::abs(trL))), p.x());
  });
  return t.report(tol, {{names[0], "L_v1 L1 = L1 - L1^2"},
                        {names[1], "L_v1 h1 = (n2 - 1) h1 L1 - (tr L1 + C + n2) h1"}});
}

TransportResult logistic_transport(const Chart& chart, const std::vector<double>& x0, int rho_index,
                                   double t_min, double t_max, int samples, double tol) {
  if (samples < 2) throw std::invalid_argument("need at least two transport samples");
  auto sys = [&](const State& x, State& dx, double) {
    const Fields f = chart.eval(x, 0);
    if (f.v.empty()) throw std::invalid_argument("chart carries no vector field");
    for (std::size_t a = 0; a < x.size(); ++a) dx[a] = f.v[a].value();
  };
  std::vector<double> times;
  for (int k = 0; k < samples; ++k) times.push_back(t_min + (t_max - t_min) * k / (samples - 1.0));
  std::vector<double> fwd{0.0}, bwd{0.0};
  for (double t : times)
    if (t != 0.0) (t > 0 ? fwd : bwd).push_back(t);
  std::sort(bwd.begin() + 1, bwd.end(), std::greater<>());
  std::map<double, double> rho_at{{0.0, x0[rho_index]}};
  for (auto* ts : {&fwd, &bwd}) {
    if (ts->size() < 2) continue;
    State x = x0;
    const double dt = (ts->back() > 0 ? 1e-3 : -1e-3);
    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, sys, x, ts->begin(), ts->end(), dt,
                            [&](const State& s, double t) { rho_at[t] = s[rho_index]; });
  }
  TransportResult r;
  const double r0 = x0[rho_index];
  for (double t : times) {
    const double e = std::exp(t);
    r.t.push_back(t);
    r.rho.push_back(rho_at.at(t));
    r.logistic.push_back(r0 * e / (1.0 - r0 + r0 * e));
    r.max_error = std::max(r.max_error, std::abs(r.rho.back() - r.logistic.back()));
  }
  return r;
}

Trajectory integrate_jplanar(const Chart& chart, const CurveState& start, const ScalarOfTime& alpha,
                             const ScalarOfTime& beta, double T, double tol, int samples) {
  const int n = chart.dim;
  if (static_cast<int>(start.x.size()) != n || static_cast<int>(start.v.size()) != n)
    throw std::invalid_argument("curve state dimension");
  if (samples < 2 || !(T > 0)) throw std::invalid_argument("need T > 0 and at least two samples");
  auto accel = [&](const std::vector<double>& x, const std::vector<double>& v, double t) {
    const Fields f = chart.eval(x, 1);
    const Christoffel G = christoffel(f.g, inverse(f.g));
    const double al = alpha(t), be = beta(t);
    if (be != 0.0 && f.J.empty()) throw std::invalid_argument("beta needs a complex structure");
    std::vector<double> a(n, 0.0);
    for (int c = 0; c < n; ++c) {
      double s = al * v[c];
      for (int p = 0; p < n; ++p) {
        if (be != 0.0) s += be * f.J(c, p).value() * v[p];
        for (int q = 0; q < n; ++q) s -= G(c, p, q).value() * v[p] * v[q];
      }
      a[c] = s;
    }
    return a;
  };
  auto sys = [&](const State& y, State& dy, double t) {
    const std::vector<double> x(y.begin(), y.begin() + n), v(y.begin() + n, y.end());
    const auto a = accel(x, v, t);
    for (int c = 0; c < n; ++c) {
      dy[c] = v[c];
      dy[n + c] = a[c];
    }
  };
  auto record = [&](Trajectory& tr, const State& y, double t) {
    CurveState s;
    s.x.assign(y.begin(), y.begin() + n);
    s.v.assign(y.begin() + n, y.end());
    s.a = accel(s.x, s.v, t);
    s.t = t;
    tr.states.push_back(std::move(s));
  };
  Trajectory tr;
  State y(2 * n);
  for (int c = 0; c < n; ++c) {
    y[c] = start.x[c];
    y[n + c] = start.v[c];
  }
  if (!inside(chart, start.x)) throw std::invalid_argument("curve starts outside the chart window");
  Dense st = make_dense(tol);
  st.initialize(y, 0.0, T / (10.0 * samples));
  int next = 0;
  double last_inside = 0.0;
  auto exit_at = [&](double t_out) {
    // bisection on the dense output between the last inside time and t_out
    double a = std::max(last_inside, st.previous_time()), b = t_out;
    State z(2 * n);
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (a + b);
      st.calc_state(m, z);
      if (inside(chart, std::vector<double>(z.begin(), z.begin() + n)))
        a = m;
      else
        b = m;
    }
    tr.exited = true;
    tr.exit_time = a;
  };
  while (next < samples) {
    try {
      st.do_step(sys);
    } catch (const DomainError&) {
      tr.exited = true;
      tr.exit_time = st.current_time();
      return tr;
    }
    while (next < samples) {
      const double t = T * next / (samples - 1.0);
      if (t > st.current_time()) break;
      State z(2 * n);
      st.calc_state(t, z);
      if (!inside(chart, std::vector<double>(z.begin(), z.begin() + n))) {
        exit_at(t);
        return tr;
      }
      try {
        record(tr, z, t);
      } catch (const DomainError&) {
        tr.exited = true;
        tr.exit_time = t;
        return tr;
      }
      last_inside = t;
      ++next;
    }
  }
  return tr;
}

PlanarityResult jplanarity_residual(const Trajectory& tr, const Chart& metric_chart) {
  PlanarityResult out;
  const int n = metric_chart.dim;
  for (const auto& s : tr.states) {
    ++out.samples;
    Fields f;
    try {
      f = metric_chart.eval(s.x, 1);
    } catch (const DomainError&) {
      ++out.degenerate;
      continue;
    }
    const Christoffel G = christoffel(f.g, inverse(f.g));
    const Eigen::MatrixXd g = values(f.g);
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(s.v.data(), n);
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(s.a.data(), n);
    for (int c = 0; c < n; ++c)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) w[c] += G(c, p, q).value() * v[p] * v[q];
    Eigen::MatrixXd S(n, f.J.empty() ? 1 : 2);
    S.col(0) = v;
    if (!f.J.empty()) S.col(1) = values(f.J) * v;
    const Eigen::MatrixXd gram = S.transpose() * g * S;
    const double vv = v.squaredNorm();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
    if (svd.singularValues().minCoeff() < 1e-12 * std::max(1.0, vv * max_abs(g))) {
      ++out.degenerate;
      continue;
    }
    const Eigen::VectorXd coef = gram.colPivHouseholderQr().solve(S.transpose() * g * w);
    const Eigen::VectorXd orth = w - S * coef;
    out.residual = std::max(out.residual, rel(orth.cwiseAbs().maxCoeff(), v.cwiseAbs2().maxCoeff()));
  }
  return out;
}

Chart partner_chart(const Chart& chart) {
  if (!chart.kahler) throw std::invalid_argument("partner metrics are built on Kahler charts");
  Chart c = chart;
  c.name = chart.name + "-partner";
  auto base = chart.eval;
  c.eval = [base](const std::vector<double>& x, int order) {
    Fields f = base(x, order);
    f.g = partner_metric(f.g, f.A);
    f.omega = transpose(f.J) * f.g;
    return f;
  };
  return c;
}

std::string ode_name(EigenOde k) {
  switch (k) {
    case EigenOde::Elliptic: return "rho^2+1";
    case EigenOde::Logistic: return "rho(1-rho)";
    case EigenOde::Parabolic: return "rho^2";
  }
  return "";
}

std::complex<double> ode_rhs(EigenOde k, std::complex<double> z) {
  switch (k) {
    case EigenOde::Elliptic: return z * z + 1.0;
    case EigenOde::Logistic: return z * (1.0 - z);
    case EigenOde::Parabolic: return z * z;
  }
  return 0.0;
}

std::vector<std::complex<double>> fixed_points(EigenOde k) {
  switch (k) {
    case EigenOde::Elliptic: return {{0.0, 1.0}, {0.0, -1.0}};
    case EigenOde::Logistic: return {0.0, 1.0};
    case EigenOde::Parabolic: return {0.0};
  }
  return {};
}

PhasePortraitSample eigenvalue_flow(EigenOde ode, std::complex<double> rho0, double T, int samples,
                                    double tol) {
  if (samples < 2 || T == 0.0) throw std::invalid_argument("need T != 0 and at least two samples");
  constexpr double kEscape = 1e6;
  auto sys = [&](const State& y, State& dy, double) {
    const std::complex<double> r = ode_rhs(ode, {y[0], y[1]});
    dy[0] = r.real();
    dy[1] = r.imag();
  };
  PhasePortraitSample out;
  out.ode = ode;
  Dense st = make_dense(tol);
  State y = {rho0.real(), rho0.imag()};
  st.initialize(y, 0.0, T / (10.0 * samples));
  int next = 0;
  while (next < samples) {
    st.do_step(sys);
    const State& cur = st.current_state();
    const bool escaped = std::hypot(cur[0], cur[1]) > kEscape;
    while (next < samples) {
      const double t = T * next / (samples - 1.0);
      if (std::abs(t) > std::abs(st.current_time())) break;
      State z(2);
      st.calc_state(t, z);
      if (std::hypot(z[0], z[1]) > kEscape) break;
      out.t.push_back(t);
      out.rho.emplace_back(z[0], z[1]);
      ++next;
    }
    if (escaped) {
      // rho' ~ rho^2 far out, so the remaining time is about 1 / |rho|
      out.blew_up = true;
      const double r = std::hypot(cur[0], cur[1]);
      out.blowup_time = st.current_time() + (T > 0 ? 1.0 : -1.0) / r;
      break;
    }
  }
  return out;
}

CircleFit circle_fit(const std::vector<std::complex<double>>& z) {
  const int m = static_cast<int>(z.size());
  if (m < 3) throw std::invalid_argument("circle fit needs three points");
  Eigen::MatrixXd M(m, 3);
  Eigen::VectorXd b(m);
  for (int k = 0; k < m; ++k) {
    M(k, 0) = z[k].real();
    M(k, 1) = z[k].imag();
    M(k, 2) = 1.0;
    b[k] = -std::norm(z[k]);
  }
  const Eigen::Vector3d s = M.colPivHouseholderQr().solve(b);
  CircleFit c;
  c.center = {-0.5 * s[0], -0.5 * s[1]};
  c.radius = std::sqrt(std::max(0.0, std::norm(c.center) - s[2]));
  for (const auto& p : z) c.residual = std::max(c.residual, std::abs(std::abs(p - c.center) - c.radius));
  return c;
}

double volume_prediction(double C, int m0, int m1, bool kahler) {
  return kahler ? (-C - 1.0) * (m0 + m1 + 1.0) : 0.5 * (-C - 1.0) * (m0 + m1);
}

std::vector<int> rho_coordinates(const Chart& chart) {
  std::vector<int> r;
  for (int a = 0; a < static_cast<int>(chart.coords.size()); ++a)
    if (chart.coords[a].rfind("rho", 0) == 0) r.push_back(a);
  return r;
}

ResidualReport volume_coefficient(SampleBatch& batch, double predicted, double tol) {
  const std::vector<std::string> names = {"volume.split", "volume.coefficient"};
  const Chart& chart = batch.chart();
  const std::vector<int> rho = rho_coordinates(chart);
  if (rho.empty()) throw std::invalid_argument("chart has no eigenvalue coordinates");
  std::vector<int> leaf;
  for (int a = 0; a < chart.dim; ++a)
    if (std::find(rho.begin(), rho.end(), a) == rho.end()) leaf.push_back(a);
  Tally t;
  for_each_point(batch, t, names, [&](Point& p, Tally& out) {
    const Fields& f = p.f();
    if (f.v.empty()) throw std::invalid_argument("chart carries no vector field");
    // v must split as v1(rho) + v2(leaf) and the leaves must be orthogonal to d_rho
    double split = 0.0;
    for (int r : rho)
      for (int a : leaf) {
        split = std::max({split, std::abs(f.v[r].d(a)), std::abs(f.v[a].d(r)),
                          std::abs(f.g(r, a).value())});
      }
    out.add(names[0], rel(split, max_abs(f.g)), p.x());
    JVec v2 = f.v;
    for (int r : rho) v2[r] = v2[r] * 0.0;
    const Eigen::MatrixXd Lg = values(lie_derivative_form(f.g, v2));
    const Eigen::MatrixXd g = values(f.g);
    const int m = static_cast<int>(leaf.size());
    Eigen::MatrixXd g2(m, m), L2(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        g2(i, j) = g(leaf[i], leaf[j]);
        L2(i, j) = Lg(leaf[i], leaf[j]);
      }
    const double fv = 0.5 * g2.partialPivLu().solve(L2).trace();
    out.add(names[1], std::abs(fv - predicted), p.x());
  });
  return t.report(tol, {{names[0], "v = v1(rho) + v2(leaf), leaves orthogonal to grad rho"},
                        {names[1], "L_v2 vol_g2 = f vol_g2 with the predicted constant f"}});
}

double jordan_curvature_eigenvalue(int size, double F1, double dF1, double x, double rho1,
                                   const std::vector<double>& rho, const std::vector<double>& F) {
  if (size != 2 && size != 3) throw std::invalid_argument("Jordan blocks have size 2 or 3");
  double p1 = 1.0;
  for (double r : rho) p1 *= rho1 - r;
  double s = size == 2 ? -dF1 / (std::pow(F1 + x, 3) * p1)
                       : -3.0 / (4.0 * std::pow(F1 + 2.0 * x, 2) * p1);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    double pi = 1.0;
    for (std::size_t j = 0; j < rho.size(); ++j)
      if (j != i) pi *= rho[i] - rho[j];
    s += F[i] / (4.0 * std::pow(rho[i] - rho1, size == 2 ? 4 : 5) * pi);
  }
  return s;
}

double lambda_two(const ScalarFn& F, double r1, double r2) {
  const auto a = F.derivs(r1), b = F.derivs(r2);
  const double d = r1 - r2;
  return (d * (a[1] + b[1]) + 2.0 * (b[0] - a[0])) / (4.0 * d * d * d);
}

double lambda_two_peano(const ScalarFn& F, double r1, double r2) {
  const double d = r1 - r2;
  const double I = boost::math::quadrature::gauss<double, 20>::integrate(
      [&](double t) { return (t - r2) * (r1 - t) * F.derivs(t)[3]; }, r2, r1);
  return I / (4.0 * d * d * d);
}

BlowupScan blowup_jordan(int size, const ScalarFn& F1, double rho1, const std::vector<double>& rho,
                         const std::vector<double>& F, int decades, int per_decade) {
  BlowupScan s;
  s.kind = size == 2 ? "jordan2" : "jordan3";
  const auto f1 = F1.derivs(rho1);
  for (double d : decade_path(decades, per_decade)) {
    // F1 + x = d (size 2), F1 + 2 x2 = d (size 3)
    const double x = size == 2 ? d - f1[0] : 0.5 * (d - f1[0]);
    s.distance.push_back(d);
    s.value.push_back(jordan_curvature_eigenvalue(size, f1[0], f1[1], x, rho1, rho, F));
  }
  finish_scan(s, per_decade);
  return s;
}

BlowupScan blowup_ell2(const ScalarFn& F, double corner, int decades, int per_decade) {
  if (corner != 0.0 && corner != 1.0) throw std::invalid_argument("corner is 0 or 1");
  BlowupScan s;
  s.kind = "ell2";
  for (double d : decade_path(decades, per_decade)) {
    const double r1 = corner == 0.0 ? d : 1.0 - 2.0 * d;
    const double r2 = corner == 0.0 ? 2.0 * d : 1.0 - d;
    s.distance.push_back(d);
    s.value.push_back(lambda_two_peano(F, r1, r2));
  }
  finish_scan(s, per_decade);
  return s;
}

}  // namespace cpg
