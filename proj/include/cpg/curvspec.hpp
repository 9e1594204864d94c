#pragma once

#include <complex>
#include <vector>

#include "cpg/builders.hpp"
#include "cpg/geometry.hpp"
#include "cpg/report.hpp"

namespace cpg {

// Endomorphisms are matrices X(a, b) = X^a_b; u^flat (x) v is the map w -> g(u, w) v.
// u wedge_J v = u^flat (x) v - v^flat (x) u + (Ju)^flat (x) Jv - (Jv)^flat (x) Ju.
Eigen::MatrixXd wedge_J(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const Eigen::MatrixXd& g,
                        const Eigen::MatrixXd& J);
// u^flat (x) v - v^flat (x) u, the real bivector acted on by R(u, v).
Eigen::MatrixXd wedge(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const Eigen::MatrixXd& g);
struct MembershipDefect {
  double skew = 0.0;     // max |g(Xa, b) + g(a, Xb)|
  double commutes = 0.0; // max |[X, J]|
};
MembershipDefect skew_hermitian_defect(const Eigen::MatrixXd& X, const Eigen::MatrixXd& g,
                                       const Eigen::MatrixXd& J);

// Curvature operator on u(g, J) (Kahler, normalized by R(u, v) = 1/4 R(u wedge_J v))
// or on so(g) (projective, R(u wedge v) = R(u, v)).
Eigen::MatrixXd curvature_operator(Point& p, const Eigen::MatrixXd& X);
// nabla Lambda as an endomorphism, nabla_w Lambda = N w.
Eigen::MatrixXd nabla_lambda(Point& p);

// [R(X), A] - 4 [X, nabla Lambda] over e_a wedge_J e_b (Kahler), or
// [R(X), L] - [X, nabla Lambda] over e_a wedge e_b (projective).
double ricci_identity_at(Point& p);
ResidualReport ricci_identity_check(SampleBatch& batch, double tol);

// nabla Lambda = p(A), minimal degree fitted by least squares on the matrix powers.
struct PolyFit {
  std::vector<double> coeffs;  // lowest degree first
  double residual = 0.0;       // max |p(A) - N| relative to 1 + |N|
  double commutator = 0.0;     // max |[N, A]|
  double condition = 0.0;      // of the power basis at the chosen degree
  bool ok = false;             // commuting, fitted within tolerance, well conditioned
  bool ill_conditioned = false;
  double operator()(double t) const;
  double derivative(double t) const;
};
PolyFit fit_nabla_lambda_poly(const Eigen::MatrixXd& N, const Eigen::MatrixXd& A, int max_degree,
                              double tol = 1e-8);

// R0(X) = sum a_k sum_{p+q=k-1} A^p X A^q, the special solution of [R(X), A] = [X, p(A)].
Eigen::MatrixXd r0_apply(const std::vector<double>& coeffs, const Eigen::MatrixXd& A,
                         const Eigen::MatrixXd& X);
// max |[R0(X), A] - [X, p(A)]| relative to 1 + |X| |p(A)|.
double r0_consistency(const std::vector<double>& coeffs, const Eigen::MatrixXd& A,
                      const Eigen::MatrixXd& X);

// Real eigenvalues of A grouped into clusters with algebraic and geometric multiplicity.
struct EigenCluster {
  double value = 0.0;
  int algebraic = 0, geometric = 0;
  bool jordan() const { return geometric < algebraic; }
};
std::vector<EigenCluster> real_eigen_clusters(const Eigen::MatrixXd& A, double gap = 1e-4);

// Spectrum of the curvature operator induced on the quotient by the centralizer of A.
struct OperatorSpectrum {
  std::vector<std::complex<double>> values;
  int algebra_dim = 0, centralizer_dim = 0;
  double invariance = 0.0;  // how far R maps the centralizer outside itself
};
OperatorSpectrum quotient_spectrum(Point& p);

// Closed-form eigenvalues: factor (p(l_i) - p(l_j)) / (l_i - l_j) for distinct real clusters and
// factor p'(l_i) for clusters carrying a Jordan block; factor 4 on Kahler charts, 1 otherwise.
struct PredictedEigenvalue {
  double value = 0.0;
  int i = 0, j = 0;  // cluster indices (i == j for the Jordan value)
};
std::vector<PredictedEigenvalue> predicted_eigenvalues(const PolyFit& fit,
                                                       const std::vector<EigenCluster>& clusters,
                                                       double factor);
struct SpectrumMatch {
  std::vector<PredictedEigenvalue> predicted;
  std::vector<std::complex<double>> numeric;  // nearest quotient eigenvalue per prediction
  double max_error = 0.0;                     // relative to 1 + |prediction|
  PolyFit fit;
  OperatorSpectrum spectrum;
};
SpectrumMatch compare_with_numeric(Point& p, double gap = 1e-4);
// compare_with_numeric over a batch: polynomial fit residual and prediction error.
ResidualReport spectrum_check(SampleBatch& batch, double tol);

// lambda(x + delta, x - delta) with one Richardson step against F'''(x) / 24.
struct FpppLimit {
  double lambda_delta = 0.0, lambda_half = 0.0, extrapolated = 0.0, exact = 0.0, error = 0.0;
};
FpppLimit fppp_limit(const ScalarFn& F, double x, double delta);

// nabla^3 a (X,Y,Z) - B (2 da(X) g(Y,Z) + da(Y) g(X,Z) + da(Z) g(X,Y)) with a = tr L,
// on projective charts sampled at order 3.
double third_order_at(Point& p, double B);
ResidualReport third_order_residual(SampleBatch& batch, double B, double tol);

// Jordan block invariant: with a canonical basis e_1..e_k of h on the block,
// alpha = vol_h(e_k, N e_k[, N^2 e_k])^(1/(k-1)) for N = L - rho, k = 2, 3.
struct JordanFrame {
  Eigen::MatrixXd E;  // columns e_1..e_k
  double eps = 1.0;   // h(e_2, e_2) for k = 3
};
JordanFrame jordan_canonical_basis(const Eigen::MatrixXd& h, const Eigen::MatrixXd& L, double rho);
double jordan_alpha(const JordanFrame& frame, const Eigen::MatrixXd& L, double rho,
                    const Eigen::VectorXd& e_top);

}  // namespace cpg
