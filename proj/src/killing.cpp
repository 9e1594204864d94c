#include "cpg/killing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cpg {
namespace {

// Largest coefficient of the value and first derivatives of a vector field.
double field_scale(const std::vector<JVec>& fields) {
  double m = 0.0;
  for (const auto& v : fields)
    for (const auto& x : v) {
      m = std::max(m, std::abs(x.value()));
      if (x.order() >= 1)
        for (int i = 0; i < x.dim(); ++i) m = std::max(m, std::abs(x.d(i)));
    }
  return m;
}

double vmax(const JVec& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x.value()));
  return m;
}

Eigen::MatrixXd columns(const std::vector<JVec>& fields, int n) {
  Eigen::MatrixXd M(n, fields.size());
  for (std::size_t j = 0; j < fields.size(); ++j) M.col(j) = values(fields[j]);
  return M;
}

// Part of w g-orthogonal to the column span of S; returns false when the Gram matrix is degenerate.
bool project_off(const Eigen::MatrixXd& G, const Eigen::MatrixXd& S, const Eigen::VectorXd& w,
                 Eigen::VectorXd& out) {
  const Eigen::MatrixXd gram = S.transpose() * G * S;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) {
    out = w;
    return true;
  }
  if (sv(sv.size() - 1) <= 1e-12 * sv(0)) return false;
  out = w - S * gram.lu().solve(S.transpose() * G * w);
  return true;
}

int numeric_rank(const Eigen::MatrixXd& M, double rtol = 1e-8) {
  if (M.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rtol * std::max(1.0, sv(0))) ++r;
  return r;
}

}  // namespace

const CanonicalKilling& killing_of(Point& p) {
  return p.memo<CanonicalKilling>("killing", [&] {
    CanonicalKilling k;
    const JVec& mu = mu_of(p);
    k.ell = static_cast<int>(mu.size()) - 1;
    for (int i = 1; i <= k.ell; ++i) {
      k.grad.push_back(gradient(mu[i], ginv_of(p)));
      if (p.chart().kahler) k.K.push_back(p.f().J * k.grad.back());
    }
    return k;
  });
}

ResidualReport killing_field_suite(SampleBatch& batch, double tol) {
  const std::vector<std::string> names = {
      "killing.hamiltonian",   "killing.killing_equation", "killing.poisson",
      "killing.multiple_eigenvalue_constant", "killing.eigenvector", "killing.count",
      "killing.regular_count", "killing.nondegenerate",   "killing.commute",
      "killing.preserve_A",    "killing.span_closed"};
  const std::map<std::string, std::string> anchors = {
      {names[0], "i_K omega = -d mu"},
      {names[1], "L_K g = 0"},
      {names[2], "K_j(mu_i) = 0"},
      {names[3], "chi(c) has vanishing differential and hessian at an eigenvalue of multiplicity >= 4"},
      {names[4], "grad rho and J grad rho are rho-eigenvectors of A"},
      {names[5], "rank of the canonical Killing fields = number of non-constant eigenvalues"},
      {names[6], "number of eigenvalues with d rho != 0 is ell at every regular sample"},
      {names[7], "g restricted to span K is non-degenerate"},
      {names[8], "[K_i,K_j] = [K_i,JK_j] = [JK_i,JK_j] = omega(K_i,K_j) = 0"},
      {names[9], "L_K A = 0"},
      {names[10], "J nabla_(K_i) K_j lies in span K"}};
  if (!batch.chart().kahler) throw std::invalid_argument("canonical Killing fields need a Kahler chart");
  Tally t;
  for_each_point(batch, t, names, [&](Point& p, Tally& out) {
    const int n = p.dim();
    const auto& x = p.x();
    const CanonicalKilling& ck = killing_of(p);
    const JVec& mu = mu_of(p);
    const Fields& f = p.f();
    const Eigen::MatrixXd G = values(f.g), J = values(f.J), W = values(f.omega),
                          A = values(f.A);
    const double kscale = field_scale(ck.K);
    double ham = 0, kil = 0, poi = 0, com = 0, pres = 0;
    double dmu_scale = 0;
    for (int i = 0; i < ck.ell; ++i) {
      const Eigen::VectorXd K = values(ck.K[i]);
      Eigen::VectorXd dmu(n);
      for (int a = 0; a < n; ++a) dmu(a) = mu[i + 1].d(a);
      dmu_scale = std::max(dmu_scale, dmu.cwiseAbs().maxCoeff());
      ham = std::max(ham, (W.transpose() * K + dmu).cwiseAbs().maxCoeff());
      kil = std::max(kil, max_abs(lie_derivative_form(f.g, ck.K[i])));
      pres = std::max(pres, max_abs(lie_derivative_endo(f.A, ck.K[i])));
      for (int j = 0; j < ck.ell; ++j) {
        Eigen::VectorXd dmuj(n);
        for (int a = 0; a < n; ++a) dmuj(a) = mu[j + 1].d(a);
        poi = std::max(poi, std::abs(dmuj.dot(K)));
        const JVec JKi = f.J * ck.K[i], JKj = f.J * ck.K[j];
        com = std::max({com, vmax(lie_bracket(ck.K[i], ck.K[j])),
                        vmax(lie_bracket(ck.K[i], JKj)), vmax(lie_bracket(JKi, JKj)),
                        std::abs(K.dot(W * values(ck.K[j])))});
      }
    }
    const double gs = std::max(max_abs(G), max_abs(A));
    out.add(names[0], rel(ham, dmu_scale), x);
    out.add(names[1], rel(kil, std::max(max_abs(G), kscale)), x);
    out.add(names[2], rel(poi, kscale * dmu_scale), x);

    // multiple constant eigenvalues: chi_C(c) is critical with vanishing hessian
    double crit = 0.0;
    bool any_multiple = false;
    for (const auto& ce : p.chart().constants) {
      if (ce.multiplicity < 2) continue;
      any_multiple = true;
      const JVec c = complex_charpoly(f.A);
      Jet v = c.back();
      for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) v = v * ce.value + c[k];
      crit = std::max(crit, std::abs(v.value()));
      for (int a = 0; a < n; ++a) {
        crit = std::max(crit, std::abs(v.d(a)));
        for (int b = 0; b < n; ++b) crit = std::max(crit, std::abs(v.d(a, b)));
      }
    }
    if (any_multiple)
      out.add(names[3], rel(crit, gs), x);
    else
      out.exclude(names[3]);

    const EigenData& ed = eigen_of(p);
    if (!ed.regular) {
      for (int k = 4; k <= 7; ++k) out.exclude(names[k]);
    } else {
      const auto& ev = eigen_jets(p);
      double eig = 0.0;
      int nonconstant = 0;
      for (const auto& r : ev) {
        const Eigen::VectorXd gr = values(gradient(r.re, ginv_of(p)));
        const Eigen::VectorXd gi = values(gradient(r.im, ginv_of(p)));
        const double rr = r.re.value(), ri = r.im.value();
        // (A - rho) w for w = grad rho and J grad rho, real and imaginary parts
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
        for (const Eigen::MatrixXd* T : {&I, &J}) {
          const Eigen::VectorXd wr = *T * gr, wi = *T * gi;
          const Eigen::VectorXd re = A * wr - rr * wr + ri * wi;
          const Eigen::VectorXd im = A * wi - rr * wi - ri * wr;
          const double s = std::max(wr.cwiseAbs().maxCoeff(), wi.cwiseAbs().maxCoeff());
          eig = std::max(eig, rel(std::max(re.cwiseAbs().maxCoeff(), im.cwiseAbs().maxCoeff()),
                                  s * std::max(1.0, max_abs(A))));
        }
        double dn = 0.0;
        for (int a = 0; a < n; ++a) dn = std::max({dn, std::abs(r.re.d(a)), std::abs(r.im.d(a))});
        if (dn > 1e-8) ++nonconstant;
      }
      out.add(names[4], eig, x);
      const Eigen::MatrixXd Kc = columns(ck.K, n);
      out.add(names[5], std::abs(numeric_rank(Kc) - nonconstant), x);
      out.add(names[6], std::abs(nonconstant - p.chart().ell), x);
      const Eigen::MatrixXd gram = Kc.transpose() * G * Kc;
      bool degenerate = false;
      if (gram.size() > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
        const auto& sv = svd.singularValues();
        degenerate = sv(sv.size() - 1) <= 1e-10 * sv(0);
      }
      out.add(names[7], degenerate ? 1.0 : 0.0, x);
    }
    out.add(names[8], rel(com, kscale * kscale), x);
    out.add(names[9], rel(pres, std::max(max_abs(A), kscale)), x);

    const Eigen::MatrixXd Kc = columns(ck.K, n);
    double span = 0.0;
    bool ok = true;
    for (int i = 0; i < ck.ell && ok; ++i)
      for (int j = 0; j < ck.ell && ok; ++j) {
        const Eigen::VectorXd w = J * values(covariant_derivative_along(ck.K[i], ck.K[j], gamma_of(p)));
        Eigen::VectorXd r;
        ok = project_off(G, Kc, w, r);
        if (ok) span = std::max(span, r.cwiseAbs().maxCoeff());
      }
    if (ok)
      out.add(names[10], rel(span, kscale * kscale), x);
    else
      out.exclude(names[10]);
  });
  return t.report(tol, anchors);
}

ResidualReport a_on_k_recurrence(SampleBatch& batch, double tol) {
  const std::string name = "killing.AK_recurrence";
  Tally t;
  for_each_point(batch, t, {name}, [&](Point& p, Tally& out) {
    const CanonicalKilling& ck = killing_of(p);
    if (ck.ell == 0 || ck.K.empty()) {
      out.exclude(name);
      return;
    }
    const JVec& mu = mu_of(p);
    const Eigen::MatrixXd A = values(p.f().A);
    const Eigen::VectorXd K1 = values(ck.K[0]);
    double res = 0.0, scale = 0.0;
    for (int i = 0; i < ck.ell; ++i) {
      const Eigen::VectorXd Ki = values(ck.K[i]);
      Eigen::VectorXd r = A * Ki - mu[i + 1].value() * K1;
      if (i + 1 < ck.ell) r += values(ck.K[i + 1]);
      res = std::max(res, r.cwiseAbs().maxCoeff());
      scale = std::max(scale, Ki.cwiseAbs().maxCoeff());
    }
    out.add(name, rel(res, scale * std::max(1.0, max_abs(A))), p.x());
  });
  return t.report(tol, {{name, "A K_i = mu_i K_1 - K_(i+1)"}});
}

ResidualReport totally_geodesic_residual(SampleBatch& batch, const SpanFn& span, double tol,
                                         const std::string& name) {
  Tally t;
  for_each_point(batch, t, {name}, [&](Point& p, Tally& out) {
    const std::vector<JVec> fields = span(p);
    const int n = p.dim();
    const Eigen::MatrixXd G = values(p.f().g);
    const Eigen::MatrixXd S = columns(fields, n);
    double res = 0.0;
    for (const auto& u : fields)
      for (const auto& v : fields) {
        const Eigen::VectorXd w = values(covariant_derivative_along(u, v, gamma_of(p)));
        Eigen::VectorXd r;
        if (!project_off(G, S, w, r)) {
          out.exclude(name);
          return;
        }
        res = std::max(res, r.cwiseAbs().maxCoeff());
      }
    const double s = field_scale(fields);
    out.add(name, rel(res, s * s), p.x());
  });
  return t.report(tol, {{name, "nabla_u v stays in the distribution"}});
}

SpanFn gradient_span() {
  return [](Point& p) { return killing_of(p).grad; };
}

ResidualReport duality_identities(SampleBatch& batch, double tol) {
  const std::vector<std::string> names = {"duality.commuting_gradients", "duality.mu_hat"};
  Tally t;
  for_each_point(batch, t, names, [&](Point& p, Tally& out) {
    const CanonicalKilling& ck = killing_of(p);
    const JVec& mu = mu_of(p);
    const int l = ck.ell, n = p.dim();
    double br = 0.0;
    for (int i = 0; i < l; ++i)
      for (int j = i + 1; j < l; ++j) br = std::max(br, vmax(lie_bracket(ck.grad[i], ck.grad[j])));
    const double s = field_scale(ck.grad);
    out.add(names[0], rel(br, s * s), p.x());
    const Eigen::MatrixXd Linv = values(p.f().A).inverse();
    const double detL = mu[l].value();
    double res = 0.0, scale = 0.0;
    for (int i = 1; i <= l; ++i) {
      Eigen::RowVectorXd dmu(n), dhat(n);
      const Jet hat = mu[i - 1] / mu[l];
      for (int a = 0; a < n; ++a) {
        dmu(a) = mu[i].d(a);
        dhat(a) = hat.d(a);
      }
      const Eigen::RowVectorXd lhs = dmu * Linv / detL;
      res = std::max(res, (lhs + dhat).cwiseAbs().maxCoeff());
      scale = std::max(scale, lhs.cwiseAbs().maxCoeff());
    }
    out.add(names[1], rel(res, scale), p.x());
  });
  return t.report(tol, {{names[0], "[grad mu_i, grad mu_j] = 0"},
                        {names[1], "(d mu_i o L^-1) / det L = -d hat mu_(ell+1-i)"}});
}

}  // namespace cpg
