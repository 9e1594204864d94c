#include "cpg/curvspec.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cpg/flows.hpp"
#include "cpg/kahler.hpp"

namespace cpg {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// a^flat (x) b as a matrix: w -> g(a, w) b
MatrixXd flat_tensor(const VectorXd& a, const VectorXd& b, const MatrixXd& g) {
  return b * (g * a).transpose();
}

MatrixXd commutator(const MatrixXd& X, const MatrixXd& Y) { return X * Y - Y * X; }

VectorXd unit(int n, int a) { return VectorXd::Unit(n, a); }

VectorXd vec(const MatrixXd& X) { return Eigen::Map<const VectorXd>(X.data(), X.size()); }

MatrixXd unvec(const VectorXd& v, int n) { return Eigen::Map<const MatrixXd>(v.data(), n, n); }

// Coordinate wedges spanning the algebra the curvature operator acts on.
std::vector<MatrixXd> wedge_span(Point& p) {
  const int n = p.dim();
  const MatrixXd g = values(p.f().g);
  std::vector<MatrixXd> out;
  if (p.chart().kahler) {
    const MatrixXd J = values(p.f().J);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) out.push_back(wedge_J(unit(n, a), unit(n, b), g, J));
  } else {
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) out.push_back(wedge(unit(n, a), unit(n, b), g));
  }
  return out;
}

double ricci_factor(const Chart& c) { return c.kahler ? 4.0 : 1.0; }

MatrixXd poly_of(const std::vector<double>& c, const MatrixXd& A) {
  const int n = A.rows();
  MatrixXd r = MatrixXd::Zero(n, n);
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) r = r * A + c[k] * MatrixXd::Identity(n, n);
  return r;
}

}  // namespace

MatrixXd wedge_J(const VectorXd& u, const VectorXd& v, const MatrixXd& g, const MatrixXd& J) {
  const VectorXd Ju = J * u, Jv = J * v;
  return flat_tensor(u, v, g) - flat_tensor(v, u, g) + flat_tensor(Ju, Jv, g) - flat_tensor(Jv, Ju, g);
}

MatrixXd wedge(const VectorXd& u, const VectorXd& v, const MatrixXd& g) {
  return flat_tensor(u, v, g) - flat_tensor(v, u, g);
}

MembershipDefect skew_hermitian_defect(const MatrixXd& X, const MatrixXd& g, const MatrixXd& J) {
  MembershipDefect d;
  d.skew = max_abs(MatrixXd(g * X + X.transpose() * g));
  d.commutes = max_abs(commutator(X, J));
  return d;
}

MatrixXd curvature_operator(Point& p, const MatrixXd& X) {
  const Riemann& R = riemann_of(p);
  const MatrixXd ginv = values(ginv_of(p));
  return p.chart().kahler ? curvature_on_endo(R, X, ginv) : curvature_on_bivector(R, X, ginv);
}

MatrixXd nabla_lambda(Point& p) {
  return values(covariant_derivative_vector(lambda_of(p), gamma_of(p)));
}

double ricci_identity_at(Point& p) {
  if (p.order() < 2) throw std::invalid_argument("the Ricci identity needs order-2 jets");
  const MatrixXd A = values(p.f().A);
  const MatrixXd N = nabla_lambda(p);
  const double k = ricci_factor(p.chart());
  double res = 0.0;
  for (const MatrixXd& X : wedge_span(p)) {
    const MatrixXd RX = curvature_operator(p, X);
    const MatrixXd D = commutator(RX, A) - k * commutator(X, N);
    res = std::max(res, rel(max_abs(D), max_abs(RX) * max_abs(A) + k * max_abs(X) * max_abs(N)));
  }
  return res;
}

ResidualReport ricci_identity_check(SampleBatch& batch, double tol) {
  const std::vector<std::string> names = {"curv.ricci_identity"};
  Tally t;
  for_each_point(batch, t, names,
                 [&](Point& p, Tally& out) { out.add(names[0], ricci_identity_at(p), p.x()); });
  return t.report(tol, {{names[0], "[R(X), A] = 4 [X, nabla Lambda] (Kahler), [R(X), L] = [X, nabla Lambda]"}});
}

double PolyFit::operator()(double t) const {
  double r = 0.0;
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k) r = r * t + coeffs[k];
  return r;
}

double PolyFit::derivative(double t) const {
  double r = 0.0;
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 1; --k) r = r * t + k * coeffs[k];
  return r;
}

PolyFit fit_nabla_lambda_poly(const MatrixXd& N, const MatrixXd& A, int max_degree, double tol) {
  const int n = A.rows();
  PolyFit fit;
  fit.commutator = max_abs(commutator(N, A));
  const double scale = 1.0 + max_abs(N);
  std::vector<MatrixXd> powers{MatrixXd::Identity(n, n)};
  for (int d = 0; d <= max_degree; ++d) {
    if (d > 0) powers.push_back(powers.back() * A);
    MatrixXd M(n * n, d + 1);
    for (int k = 0; k <= d; ++k) M.col(k) = vec(powers[k]);
    Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorXd s = svd.singularValues();
    const double cond = s[s.size() - 1] > 0 ? s[0] / s[s.size() - 1] : INFINITY;
    const VectorXd a = svd.solve(vec(N));
    const double r = (M * a - vec(N)).cwiseAbs().maxCoeff() / scale;
    fit.coeffs.assign(a.data(), a.data() + a.size());
    fit.residual = r;
    fit.condition = cond;
    if (r <= tol) break;
  }
  fit.ill_conditioned = !(fit.condition < 1e12);
  fit.ok = fit.residual <= tol && fit.commutator <= tol * (1.0 + max_abs(N) * max_abs(A)) &&
           !fit.ill_conditioned;
  return fit;
}

MatrixXd r0_apply(const std::vector<double>& c, const MatrixXd& A, const MatrixXd& X) {
  const int n = A.rows();
  MatrixXd out = MatrixXd::Zero(n, n);
  std::vector<MatrixXd> P{MatrixXd::Identity(n, n)};
  for (std::size_t k = 1; k < c.size(); ++k) P.push_back(P.back() * A);
  for (std::size_t k = 1; k < c.size(); ++k)
    for (std::size_t q = 0; q < k; ++q) out += c[k] * P[q] * X * P[k - 1 - q];
  return out;
}

double r0_consistency(const std::vector<double>& c, const MatrixXd& A, const MatrixXd& X) {
  const MatrixXd pA = poly_of(c, A);
  const MatrixXd D = commutator(r0_apply(c, A, X), A) - commutator(X, pA);
  return rel(max_abs(D), max_abs(X) * max_abs(pA));
}

std::vector<EigenCluster> real_eigen_clusters(const MatrixXd& A, double gap) {
  const int n = A.rows();
  Eigen::EigenSolver<MatrixXd> es(A, false);
  std::vector<double> re;
  for (int k = 0; k < n; ++k)
    if (std::abs(es.eigenvalues()[k].imag()) < gap) re.push_back(es.eigenvalues()[k].real());
  std::sort(re.begin(), re.end());
  std::vector<EigenCluster> out;
  std::vector<std::vector<double>> groups;
  for (double x : re) {
    if (groups.empty() || x - groups.back().back() > gap) groups.emplace_back();
    groups.back().push_back(x);
  }
  for (const auto& gr : groups) {
    EigenCluster c;
    for (double x : gr) c.value += x;
    c.value /= static_cast<double>(gr.size());
    c.algebraic = static_cast<int>(gr.size());
    Eigen::JacobiSVD<MatrixXd> svd(A - c.value * MatrixXd::Identity(n, n));
    const VectorXd s = svd.singularValues();
    int rank = 0;
    for (int k = 0; k < s.size(); ++k)
      if (s[k] > std::sqrt(gap) * (1.0 + max_abs(A))) ++rank;
    c.geometric = n - rank;
    out.push_back(c);
  }
  return out;
}

OperatorSpectrum quotient_spectrum(Point& p) {
  const int n = p.dim();
  const MatrixXd A = values(p.f().A);
  const std::vector<MatrixXd> span = wedge_span(p);
  MatrixXd S(n * n, static_cast<int>(span.size()));
  for (std::size_t k = 0; k < span.size(); ++k) S.col(k) = vec(span[k]);
  Eigen::JacobiSVD<MatrixXd> svd(S, Eigen::ComputeThinU);
  const VectorXd sv = svd.singularValues();
  int d = 0;
  while (d < sv.size() && sv[d] > 1e-10 * sv[0]) ++d;
  const MatrixXd Q = svd.matrixU().leftCols(d);  // orthonormal basis of the algebra
  MatrixXd M(d, d), C(n * n, d);
  for (int k = 0; k < d; ++k) {
    const MatrixXd X = unvec(Q.col(k), n);
    M.col(k) = Q.transpose() * vec(curvature_operator(p, X));
    C.col(k) = vec(commutator(X, A));
  }
  Eigen::JacobiSVD<MatrixXd> cs(C, Eigen::ComputeFullV);
  const VectorXd cv = cs.singularValues();
  const double cmax = cv.size() ? cv[0] : 0.0;
  int r = 0;
  while (r < cv.size() && cv[r] > 1e-9 * std::max(cmax, 1e-300)) ++r;
  const MatrixXd W = cs.matrixV().leftCols(r);       // complement of the centralizer
  const MatrixXd Z = cs.matrixV().rightCols(d - r);  // centralizer
  OperatorSpectrum out;
  out.algebra_dim = d;
  out.centralizer_dim = d - r;
  out.invariance = Z.cols() ? rel(max_abs(MatrixXd(W.transpose() * M * Z)), max_abs(M)) : 0.0;
  if (r > 0) {
    Eigen::EigenSolver<MatrixXd> es(W.transpose() * M * W, false);
    for (int k = 0; k < r; ++k) out.values.push_back(es.eigenvalues()[k]);
  }
  return out;
}

std::vector<PredictedEigenvalue> predicted_eigenvalues(const PolyFit& fit,
                                                       const std::vector<EigenCluster>& cl,
                                                       double factor) {
  std::vector<PredictedEigenvalue> out;
  const int m = static_cast<int>(cl.size());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      out.push_back({factor * (fit(cl[i].value) - fit(cl[j].value)) / (cl[i].value - cl[j].value), i, j});
  for (int i = 0; i < m; ++i)
    if (cl[i].jordan()) out.push_back({factor * fit.derivative(cl[i].value), i, i});
  return out;
}

SpectrumMatch compare_with_numeric(Point& p, double gap) {
  if (p.order() < 2) throw std::invalid_argument("curvature spectra need order-2 jets");
  const MatrixXd A = values(p.f().A);
  const MatrixXd N = nabla_lambda(p);
  const auto cl = real_eigen_clusters(A, gap);
  int jmax = 1;
  for (const auto& c : cl) jmax = std::max(jmax, c.algebraic - c.geometric + 1);
  // non-real eigenvalues raise the degree of p but carry no prediction here
  Eigen::EigenSolver<MatrixXd> es(A, false);
  std::vector<std::complex<double>> distinct;
  for (int k = 0; k < A.rows(); ++k) {
    const std::complex<double> z = es.eigenvalues()[k];
    if (std::abs(z.imag()) < gap) continue;
    if (std::none_of(distinct.begin(), distinct.end(), [&](const auto& w) { return std::abs(w - z) < gap; }))
      distinct.push_back(z);
  }
  SpectrumMatch out;
  out.fit = fit_nabla_lambda_poly(N, A, static_cast<int>(cl.size() + distinct.size()) + jmax - 1);
  out.predicted = predicted_eigenvalues(out.fit, cl, ricci_factor(p.chart()));
  out.spectrum = quotient_spectrum(p);
  for (const auto& pr : out.predicted) {
    std::complex<double> best = NAN;
    double err = INFINITY;
    for (const auto& z : out.spectrum.values) {
      const double e = std::abs(z - pr.value);
      if (e < err) {
        err = e;
        best = z;
      }
    }
    // a defective eigenvalue splits under rounding; the mean of its cluster is stable
    std::complex<double> sum = 0.0;
    int count = 0;
    for (const auto& z : out.spectrum.values)
      if (std::abs(z - best) < 1e-3 * (1.0 + std::abs(best))) {
        sum += z;
        ++count;
      }
    if (count > 0) best = sum / static_cast<double>(count);
    err = std::abs(best - pr.value);
    out.numeric.push_back(best);
    out.max_error = std::max(out.max_error, rel(err, std::abs(pr.value)));
  }
  return out;
}

ResidualReport spectrum_check(SampleBatch& batch, double tol) {
  const std::vector<std::string> names = {"spectrum.fit", "spectrum.match"};
  Tally t;
  for_each_point(batch, t, names, [&](Point& p, Tally& out) {
    const SpectrumMatch m = compare_with_numeric(p);
    out.add(names[0], m.fit.residual, p.x());
    out.add(names[1], m.max_error, p.x());
  });
  return t.report(tol, {{names[0], "nabla Lambda = p(A) for a polynomial p"},
                        {names[1], "curvature eigenvalues (p(l_i) - p(l_j)) / (l_i - l_j) and p'(l_i)"}});
}

FpppLimit fppp_limit(const ScalarFn& F, double x, double delta) {
  FpppLimit r;
  r.lambda_delta = lambda_two(F, x + delta, x - delta);
  r.lambda_half = lambda_two(F, x + 0.5 * delta, x - 0.5 * delta);
  r.extrapolated = (4.0 * r.lambda_half - r.lambda_delta) / 3.0;
  r.exact = F.derivs(x)[3] / 24.0;
  r.error = std::abs(r.extrapolated - r.exact);
  return r;
}

double third_order_at(Point& p, double B) {
  if (p.chart().kahler) throw std::invalid_argument("the third-order equation is checked on projective charts");
  if (p.order() < 3) throw std::invalid_argument("the third-order equation needs order-3 jets");
  const int n = p.dim();
  const Christoffel& G = gamma_of(p);
  const Jet a = trace(p.f().A);
  const JVec da = differential(a);
  const std::vector<JMat> D = covariant_derivative_form(hessian(a, G), G);
  const MatrixXd g = values(p.f().g);
  double res = 0.0, big = 0.0, dmax = 0.0;
  for (int i = 0; i < n; ++i) dmax = std::max(dmax, std::abs(da[i].value()));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const double lhs = D[x](y, z).value();
        const double rhs = B * (2.0 * da[x].value() * g(y, z) + da[y].value() * g(x, z) +
                                da[z].value() * g(x, y));
        res = std::max(res, std::abs(lhs - rhs));
        big = std::max(big, std::abs(lhs));
      }
  return rel(res, big + std::abs(B) * dmax * max_abs(g));
}

ResidualReport third_order_residual(SampleBatch& batch, double B, double tol) {
  const std::vector<std::string> names = {"curv.third_order"};
  Tally t;
  for_each_point(batch, t, names,
                 [&](Point& p, Tally& out) { out.add(names[0], third_order_at(p, B), p.x()); });
  return t.report(tol, {{names[0], "nabla^3 tr L = B (2 d tr L (x) g + symmetrized)"}});
}

JordanFrame jordan_canonical_basis(const MatrixXd& h, const MatrixXd& L, double rho) {
  const int k = L.rows();
  if (k != 2 && k != 3) throw std::invalid_argument("Jordan frames exist for blocks of size 2 and 3");
  const MatrixXd Nl = L - rho * MatrixXd::Identity(k, k);
  const MatrixXd top = k == 2 ? Nl : MatrixXd(Nl * Nl);
  // start from the coordinate vector that is least degenerate for h(N^(k-1) w, w)
  int best = 0;
  double bval = 0.0;
  for (int a = 0; a < k; ++a) {
    const VectorXd w = unit(k, a);
    const double c = std::abs((top * w).dot(h * w));
    if (c > bval) {
      bval = c;
      best = a;
    }
  }
  if (bval == 0.0) throw std::invalid_argument("block carries no Jordan chain of full length");
  const VectorXd w = unit(k, best);
  JordanFrame f;
  f.E.resize(k, k);
  if (k == 2) {
    const VectorXd v1 = Nl * w;
    const double c = v1.dot(h * w), d = w.dot(h * w);
    f.E.col(0) = v1 / c;
    f.E.col(1) = w - d / (2.0 * c) * v1;
  } else {
    const VectorXd v2 = Nl * w, v1 = Nl * v2;
    const double c = v1.dot(h * w), b = v2.dot(h * w), d = w.dot(h * w);
    f.eps = c > 0 ? 1.0 : -1.0;
    const double pp = -b / c;
    const double q = -(d + 2.0 * pp * b + pp * pp * c) / (2.0 * c);
    f.E.col(0) = v1 / c;
    f.E.col(1) = v2 / std::sqrt(std::abs(c));
    f.E.col(2) = w + pp * v2 + q * v1;
  }
  return f;
}

double jordan_alpha(const JordanFrame& f, const MatrixXd& L, double rho, const VectorXd& e_top) {
  const int k = L.rows();
  const MatrixXd Nl = L - rho * MatrixXd::Identity(k, k);
  MatrixXd V(k, k);
  V.col(0) = e_top;
  for (int i = 1; i < k; ++i) V.col(i) = Nl * V.col(i - 1);
  // vol(e_k, ..., e_1) = 1: the reversal has sign -1 for k = 2 and k = 3
  const double vol = -f.E.partialPivLu().solve(V).determinant();
  return k == 2 ? vol : std::cbrt(vol);
}

}  // namespace cpg
