#include "cpg/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace cpg {

Christoffel christoffel(const JMat& g, const JMat& ginv) {
  const int n = g.rows();
  // dg[k](a,b) = d_k g_ab
  std::vector<JMat> dg;
  dg.reserve(n);
  for (int k = 0; k < n; ++k) dg.push_back(partial(g, k));
  const int o = dg[0](0, 0).order();
  const JMat gi = truncated(ginv, o);
  Christoffel G;
  G.n = n;
  G.c.resize(n * n * n);
  // lowered Gamma_{d,ab} = 1/2 (d_a g_bd + d_b g_ad - d_d g_ab)
  std::vector<Jet> low(n * n * n);
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        Jet s = (dg[a](b, d) + dg[b](a, d) - dg[d](a, b)) * 0.5;
        low[(d * n + a) * n + b] = s;
        low[(d * n + b) * n + a] = s;
      }
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        Jet s = gi(c, 0) * low[(0 * n + a) * n + b];
        for (int d = 1; d < n; ++d) s += gi(c, d) * low[(d * n + a) * n + b];
        G(c, a, b) = s;
        G(c, b, a) = s;
      }
  return G;
}

Riemann riemann(const Christoffel& G) {
  const int n = G.n;
  Riemann R;
  R.n = n;
  R.r.resize(n * n * n * n);
  // dG[c] holds d_c Gamma^a_{db}
  std::vector<Christoffel> dG(n);
  for (int c = 0; c < n; ++c) {
    dG[c].n = n;
    dG[c].c.reserve(n * n * n);
    for (const auto& x : G.c) dG[c].c.push_back(x.partial(c));
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        R(a, b, c, c) = Jet::constant(0.0, dG[0].c[0].dim(), dG[0].c[0].order());
        for (int d = c + 1; d < n; ++d) {
          Jet s = dG[c](a, d, b) - dG[d](a, c, b);
          for (int e = 0; e < n; ++e) s += G(a, c, e) * G(e, d, b) - G(a, d, e) * G(e, c, b);
          R(a, b, c, d) = s;
          R(a, b, d, c) = -s;
        }
      }
  return R;
}

std::vector<JMat> covariant_derivative_endo(const JMat& A, const Christoffel& G) {
  const int n = A.rows();
  std::vector<JMat> out;
  out.reserve(n);
  for (int a = 0; a < n; ++a) {
    JMat m = partial(A, a);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Jet s = m(b, c);
        for (int d = 0; d < n; ++d) s += G(b, a, d) * A(d, c) - G(d, a, c) * A(b, d);
        m(b, c) = s;
      }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<JMat> covariant_derivative_form(const JMat& T, const Christoffel& G) {
  const int n = T.rows();
  std::vector<JMat> out;
  out.reserve(n);
  for (int a = 0; a < n; ++a) {
    JMat m = partial(T, a);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Jet s = m(b, c);
        for (int d = 0; d < n; ++d) s -= G(d, a, b) * T(d, c) + G(d, a, c) * T(b, d);
        m(b, c) = s;
      }
    out.push_back(std::move(m));
  }
  return out;
}

JMat covariant_derivative_vector(const JVec& w, const Christoffel& G) {
  const int n = static_cast<int>(w.size());
  JMat m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet s = w[b].partial(a);
      for (int c = 0; c < n; ++c) s += G(b, a, c) * w[c];
      m(b, a) = s;
    }
  return m;
}

JVec covariant_derivative_along(const JVec& u, const JVec& w, const Christoffel& G) {
  return covariant_derivative_vector(w, G) * u;
}

Jet lie_derivative(const Jet& f, const JVec& v) {
  Jet s = v[0] * f.partial(0);
  for (std::size_t c = 1; c < v.size(); ++c) s += v[c] * f.partial(static_cast<int>(c));
  return s;
}

JVec lie_bracket(const JVec& v, const JVec& w) {
  const int n = static_cast<int>(v.size());
  JVec r(n);
  for (int a = 0; a < n; ++a) {
    Jet s = v[0] * w[a].partial(0) - w[0] * v[a].partial(0);
    for (int c = 1; c < n; ++c) s += v[c] * w[a].partial(c) - w[c] * v[a].partial(c);
    r[a] = s;
  }
  return r;
}

JMat lie_derivative_form(const JMat& T, const JVec& v) {
  const int n = T.rows();
  std::vector<JVec> dv(n);  // dv[a][c] = d_a v^c
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) dv[a].push_back(v[c].partial(a));
  JMat r(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet s = v[0] * T(a, b).partial(0);
      for (int c = 1; c < n; ++c) s += v[c] * T(a, b).partial(c);
      for (int c = 0; c < n; ++c) s += T(c, b) * dv[a][c] + T(a, c) * dv[b][c];
      r(a, b) = s;
    }
  return r;
}

JMat lie_derivative_endo(const JMat& A, const JVec& v) {
  const int n = A.rows();
  JMat r(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet s = v[0] * A(a, b).partial(0);
      for (int c = 1; c < n; ++c) s += v[c] * A(a, b).partial(c);
      for (int c = 0; c < n; ++c) s += A(a, c) * v[c].partial(b) - A(c, b) * v[a].partial(c);
      r(a, b) = s;
    }
  return r;
}

std::vector<Jet> exterior_derivative_2form(const JMat& w) {
  const int n = w.rows();
  std::vector<Jet> r(n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        r[(a * n + b) * n + c] = w(b, c).partial(a) + w(c, a).partial(b) + w(a, b).partial(c);
  return r;
}

JVec differential(const Jet& f) {
  JVec d;
  for (int a = 0; a < f.dim(); ++a) d.push_back(f.partial(a));
  return d;
}

JVec gradient(const Jet& f, const JMat& ginv) {
  const JVec df = differential(f);
  return truncated(ginv, df[0].order()) * df;
}

JMat hessian(const Jet& f, const Christoffel& G) {
  const int n = f.dim();
  const JVec df = differential(f);
  JMat h(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Jet s = df[a].partial(b);
      for (int c = 0; c < n; ++c) s -= G(c, a, b) * df[c];
      h(a, b) = s;
      h(b, a) = s;
    }
  return h;
}

Eigen::MatrixXd curvature_endo(const Riemann& R, int c, int d) {
  const int n = R.n;
  Eigen::MatrixXd m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m(a, b) = R(a, b, c, d).value();
  return m;
}

Eigen::MatrixXd curvature_on_bivector(const Riemann& R, const Eigen::MatrixXd& X,
                                      const Eigen::MatrixXd& ginv) {
  const int n = R.n;
  const Eigen::MatrixXd B = -X * ginv;  // B^{cd}
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int c = 0; c < n; ++c)
    for (int d = c + 1; d < n; ++d) {
      const double w = B(c, d);
      if (w == 0.0) continue;
      out += w * curvature_endo(R, c, d);
    }
  return out;
}

Eigen::MatrixXd curvature_on_endo(const Riemann& R, const Eigen::MatrixXd& X,
                                  const Eigen::MatrixXd& ginv) {
  return 2.0 * curvature_on_bivector(R, X, ginv);
}

const JMat& ginv_of(Point& p) {
  return p.memo<JMat>("ginv", [&] { return inverse(p.f().g); });
}

const Christoffel& gamma_of(Point& p) {
  return p.memo<Christoffel>("gamma", [&] { return christoffel(p.f().g, ginv_of(p)); });
}

const Riemann& riemann_of(Point& p) {
  return p.memo<Riemann>("riemann", [&] { return riemann(gamma_of(p)); });
}

double rel(double residual, double scale) { return residual / (1.0 + scale); }

}  // namespace cpg
