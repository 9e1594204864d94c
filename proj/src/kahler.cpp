#include "cpg/kahler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cpg {
namespace {

double vmax(const JVec& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x.value()));
  return m;
}

Eigen::VectorXd vals(const JVec& v) { return values(v); }

// c(t) / (t - r) by synthetic division; the remainder is dropped.
JVec divide_linear(const JVec& c, double r) {
  const int deg = static_cast<int>(c.size()) - 1;
  JVec q(deg);
  Jet carry = c[deg];
  for (int k = deg - 1; k >= 0; --k) {
    q[k] = carry;
    carry = c[k] + carry * r;
  }
  return q;
}

CJet horner(const JVec& c, const CJet& z) {
  const Jet zero = c[0] * 0.0;
  CJet r(c.back(), zero);
  for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) r = r * z + CJet(c[k], zero);
  return r;
}

}  // namespace

const JVec& lambda_of(Point& p) {
  return p.memo<JVec>("lambda", [&] {
    const double factor = p.chart().kahler ? 0.25 : 0.5;
    JVec L = gradient(trace(p.f().A), ginv_of(p));
    for (auto& x : L) x *= factor;
    return L;
  });
}

KahlerResiduals kahler_residuals(Point& p) {
  const Fields& f = p.f();
  const int n = p.dim();
  const Eigen::MatrixXd g = values(f.g), J = values(f.J), w = values(f.omega);
  const double scale = std::max({max_abs(g), max_abs(J), max_abs(w)});
  KahlerResiduals r;
  r.J2 = rel(max_abs(Eigen::MatrixXd(J * J + Eigen::MatrixXd::Identity(n, n))), scale);
  r.hermitian = rel(max_abs(Eigen::MatrixXd(J.transpose() * g * J - g)), scale);
  r.omega = rel(max_abs(Eigen::MatrixXd(w - J.transpose() * g)), scale);
  double dw = 0.0;
  for (const auto& c : exterior_derivative_2form(f.omega)) dw = std::max(dw, std::abs(c.value()));
  r.d_omega = rel(dw, scale);
  double nj = 0.0;
  for (const auto& m : covariant_derivative_endo(f.J, gamma_of(p))) nj = std::max(nj, max_abs(m));
  r.nabla_J = rel(nj, scale);
  return r;
}

double cproj_residual_at(Point& p) {
  const Fields& f = p.f();
  const int n = p.dim();
  const auto nA = covariant_derivative_endo(f.A, gamma_of(p));
  const Eigen::MatrixXd G = values(f.g), J = values(f.J), A = values(f.A);
  const Eigen::VectorXd L = vals(lambda_of(p));
  const Eigen::VectorXd JL = J * L, Lf = G * L, JLf = G * JL;
  double res = 0.0;
  for (int a = 0; a < n; ++a) {
    const Eigen::VectorXd Xf = G.col(a), JX = J.col(a), JXf = G * JX;
    Eigen::MatrixXd rhs = L * Xf.transpose() + JL * JXf.transpose() + JX * JLf.transpose();
    rhs.row(a) += Lf.transpose();
    res = std::max(res, max_abs(Eigen::MatrixXd(values(nA[a]) - rhs)));
  }
  return rel(res, std::max(max_abs(A), L.cwiseAbs().maxCoeff()));
}

double proj_residual_at(Point& p) {
  const Fields& f = p.f();
  const int n = p.dim();
  const auto nA = covariant_derivative_endo(f.A, gamma_of(p));
  const Eigen::MatrixXd G = values(f.g), A = values(f.A);
  const Eigen::VectorXd L = vals(lambda_of(p));
  const Eigen::VectorXd Lf = G * L;
  double res = 0.0;
  for (int a = 0; a < n; ++a) {
    Eigen::MatrixXd rhs = L * G.col(a).transpose();
    rhs.row(a) += Lf.transpose();
    res = std::max(res, max_abs(Eigen::MatrixXd(values(nA[a]) - rhs)));
  }
  return rel(res, std::max(max_abs(A), L.cwiseAbs().maxCoeff()));
}

double selfadjoint_residual_at(Point& p) {
  const Eigen::MatrixXd G = values(p.f().g), A = values(p.f().A);
  const Eigen::MatrixXd gA = G * A;
  return rel(max_abs(Eigen::MatrixXd(gA - gA.transpose())), std::max(max_abs(G), max_abs(A)));
}

double commutator_AJ_at(Point& p) {
  const Eigen::MatrixXd A = values(p.f().A), J = values(p.f().J);
  return rel(max_abs(Eigen::MatrixXd(A * J - J * A)), max_abs(A));
}

ResidualReport check_kahler(SampleBatch& batch, double tol) {
  const std::vector<std::string> names = {"kahler.J_squared", "kahler.metric_hermitian",
                                          "kahler.omega_matches", "kahler.d_omega",
                                          "kahler.nabla_J"};
  Tally t;
  for_each_point(batch, t, names, [&](Point& p, Tally& out) {
    const auto r = kahler_residuals(p);
    out.add(names[0], r.J2, p.x());
    out.add(names[1], r.hermitian, p.x());
    out.add(names[2], r.omega, p.x());
    out.add(names[3], r.d_omega, p.x());
    out.add(names[4], r.nabla_J, p.x());
  });
  return t.report(tol, {{names[0], "J^2 = -Id"},
                        {names[1], "g(J.,J.) = g"},
                        {names[2], "omega = g(J.,.)"},
                        {names[3], "d omega = 0"},
                        {names[4], "nabla J = 0"}});
}

ResidualReport cproj_residual(SampleBatch& batch, double tol) {
  const std::vector<std::string> names = {"cproj.hermitian", "cproj.compatible"};
  Tally t;
  for_each_point(batch, t, names, [&](Point& p, Tally& out) {
    out.add(names[0], std::max(selfadjoint_residual_at(p), commutator_AJ_at(p)), p.x());
    out.add(names[1], cproj_residual_at(p), p.x());
  });
  return t.report(tol, {{names[0], "A g-selfadjoint and [A,J] = 0"},
                        {names[1], "nabla_X A = X(x)Lambda + Lambda(x)X + JX(x)JLambda + "
                                   "JLambda(x)JX, Lambda = grad tr A / 4"}});
}

ResidualReport proj_residual(SampleBatch& batch, double tol) {
  const std::vector<std::string> names = {"proj.selfadjoint", "proj.compatible"};
  Tally t;
  for_each_point(batch, t, {names[0]},
                 [&](Point& p, Tally& out) { out.add(names[0], selfadjoint_residual_at(p), p.x()); });
  if (t.max(names[0]) > tol)
    throw std::invalid_argument("L is not h-selfadjoint; worst sample " +
                                format_point(t.worst(names[0])));
  for_each_point(batch, t, {names[1]},
                 [&](Point& p, Tally& out) { out.add(names[1], proj_residual_at(p), p.x()); });
  return t.report(tol, {{names[0], "L h-selfadjoint"},
                        {names[1], "nabla_X L = X(x)Lambda + Lambda(x)X, Lambda = grad tr L / 2"}});
}

JMat partner_metric(const JMat& g, const JMat& A) {
  const Jet dA = det(A);
  if (dA.value() <= 0.0) throw DomainError("partner metric needs det A > 0");
  const JMat m = g * inverse(A) * pow(dA, -0.5);
  JMat s = m;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

JMat recover_A(const JMat& g, const JMat& ghat) {
  const int n = g.rows() / 2;
  const Jet ratio = det(ghat) / det(g);
  if (ratio.value() <= 0.0) throw DomainError("determinant ratio must be positive");
  return inverse(ghat) * g * pow(ratio, 1.0 / (2.0 * (n + 1)));
}

JVec complex_charpoly(const JMat& A) {
  const JVec c = charpoly(A);
  const int n2 = static_cast<int>(c.size()) - 1;
  if (n2 % 2) throw std::invalid_argument("complex characteristic polynomial needs even dimension");
  const int n = n2 / 2;
  JVec q(n + 1, c[0] * 0.0);
  q[n] += 1.0;
  for (int k = n - 1; k >= 0; --k) {
    Jet s = c[n + k];
    for (int i = k + 1; i <= n - 1; ++i) s -= q[i] * q[n + k - i];
    q[k] = s * 0.5;
  }
  return q;
}

Jet det_complex(const JMat& A) {
  const JVec q = complex_charpoly(A);
  const int n = static_cast<int>(q.size()) - 1;
  return (n % 2 ? -1.0 : 1.0) * q[0];
}

const JVec& nonconstant_charpoly(Point& p) {
  return p.memo<JVec>("chi_nc", [&] {
    JVec c = p.chart().kahler ? complex_charpoly(p.f().A) : charpoly(p.f().A);
    for (const auto& ce : p.chart().constants)
      for (int m = 0; m < ce.multiplicity; ++m) c = divide_linear(c, ce.value);
    return c;
  });
}

const JVec& mu_of(Point& p) {
  return p.memo<JVec>("mu", [&] {
    const JVec& c = nonconstant_charpoly(p);
    const int l = static_cast<int>(c.size()) - 1;
    JVec mu(l + 1);
    for (int i = 0; i <= l; ++i) mu[i] = (i % 2 ? -1.0 : 1.0) * c[l - i];
    return mu;
  });
}

const EigenData& eigen_of(Point& p, double gap) {
  return p.memo<EigenData>("eigen", [&] {
    EigenData e;
    const JVec& c = nonconstant_charpoly(p);
    if (c.size() > 1) {
      std::vector<double> cv;
      for (const auto& x : c) cv.push_back(x.value());
      e.values = poly_roots(cv);
    }
    e.min_gap = INFINITY;
    for (std::size_t i = 0; i < e.values.size(); ++i) {
      for (std::size_t j = i + 1; j < e.values.size(); ++j)
        e.min_gap = std::min(e.min_gap, std::abs(e.values[i] - e.values[j]));
      for (const auto& ce : p.chart().constants)
        e.min_gap = std::min(e.min_gap, std::abs(e.values[i] - ce.value));
    }
    e.regular = e.min_gap >= gap;
    return e;
  });
}

const std::vector<CJet>& eigen_jets(Point& p) {
  return p.memo<std::vector<CJet>>("eigen_jets", [&] {
    const JVec& c = nonconstant_charpoly(p);
    JVec dc;
    for (std::size_t k = 1; k < c.size(); ++k) dc.push_back(c[k] * static_cast<double>(k));
    const Jet zero = c[0] * 0.0;
    std::vector<CJet> out;
    for (const auto& v : eigen_of(p).values) {
      CJet z(zero + v.real(), zero + v.imag());
      for (int it = 0; it <= p.order() + 1; ++it) z = z - horner(c, z) / horner(dc, z);
      out.push_back(z);
    }
    return out;
  });
}

ResidualReport hamiltonian_killing_check(SampleBatch& batch, double tol) {
  const std::vector<std::string> names = {"hamiltonian.commutes_with_J",
                                          "hamiltonian.hessian_hermitian", "hamiltonian.killing"};
  Tally t;
  for_each_point(batch, t, names, [&](Point& p, Tally& out) {
    const double comm = commutator_AJ_at(p);
    out.add(names[0], comm, p.x());
    if (comm > tol) {
      out.exclude(names[1]);
      out.exclude(names[2]);
      return;
    }
    const Jet f = det_complex(p.f().A);
    const Eigen::MatrixXd H = values(hessian(f, gamma_of(p)));
    const Eigen::MatrixXd J = values(p.f().J);
    out.add(names[1], rel(max_abs(Eigen::MatrixXd(J.transpose() * H * J - H)), max_abs(H)), p.x());
    const JVec K = p.f().J * gradient(f, ginv_of(p));
    out.add(names[2],
            rel(max_abs(lie_derivative_form(p.f().g, K)),
                std::max(max_abs(values(p.f().g)), vmax(K))),
            p.x());
  });
  return t.report(tol, {{names[0], "[A,J] = 0"},
                        {names[1], "hessian of det_C A is hermitian"},
                        {names[2], "L_K g = 0 for K = J grad det_C A"}});
}

double connection_difference_at(Point& p, const JMat& ghat) {
  const int n = p.dim();
  const Christoffel gh = christoffel(ghat, inverse(ghat));
  const Christoffel& g0 = gamma_of(p);
  const Jet ratio = det(ghat) / det(p.f().g);
  if (ratio.value() <= 0.0) throw DomainError("det ghat / det g must be positive");
  const Jet phi = log(ratio) / (4.0 * (n / 2 + 1));
  Eigen::VectorXd Phi(n);
  for (int a = 0; a < n; ++a) Phi(a) = phi.d(a);
  const Eigen::MatrixXd J = values(p.f().J);
  const Eigen::VectorXd PhiJ = J.transpose() * Phi;
  double res = 0.0, scale = 0.0;
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double diff = gh(c, a, b).value() - g0(c, a, b).value();
        double T = -PhiJ(a) * J(c, b) - PhiJ(b) * J(c, a);
        if (c == b) T += Phi(a);
        if (c == a) T += Phi(b);
        res = std::max(res, std::abs(diff - T));
        scale = std::max(scale, std::abs(g0(c, a, b).value()));
      }
  return rel(res, scale);
}

ResidualReport connection_difference_check(SampleBatch& batch, double tol) {
  const std::string name = "partner.connection_difference";
  Tally t;
  for_each_point(batch, t, {name}, [&](Point& p, Tally& out) {
    out.add(name, connection_difference_at(p, partner_metric(p.f().g, p.f().A)), p.x());
  });
  return t.report(tol, {{name, "hat nabla - nabla = Phi(X)Y + Phi(Y)X - Phi(JX)JY - Phi(JY)JX"}});
}

}  // namespace cpg
