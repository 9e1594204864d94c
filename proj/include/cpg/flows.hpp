#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "cpg/builders.hpp"
#include "cpg/report.hpp"

namespace cpg {

// L_v A = -beta A^2 + (delta - alpha) A + gamma Id and
// L_v g = (-k beta tr A - (n + 1) alpha) g - beta g A, with k = 1/2 and n the
// complex dimension on Kahler charts, k = 1 and n the real dimension otherwise.
struct LieCoefficients {
  double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0;
};
// beta = 1, delta - alpha = 1, gamma = 0 and L_v g = -g A - (sum rho_i + C) g.
LieCoefficients canonical_coefficients(const Chart& chart, double C);

struct LieDefects {
  Eigen::MatrixXd A, g;  // left minus right hand sides
  double scale_A = 0.0, scale_g = 0.0;
};
LieDefects lie_defects(const Fields& f, const JVec& v, const LieCoefficients& c, bool kahler);

// Both equations for the chart's own field v.
ResidualReport lie_residual_suite(SampleBatch& batch, const LieCoefficients& c, double tol);
// Split block equations: L_v L = L - L^2, L_v h = (n2 - 1) h L - (tr L + C + n2) h.
ResidualReport split_block_residual(SampleBatch& batch, int n2, double C, double tol);

// Integral curve of the chart field v, with the coordinate `rho_index` compared
// against the logistic law rho(t) = rho0 e^t / (1 - rho0 + rho0 e^t).
struct TransportResult {
  std::vector<double> t, rho, logistic;
  double max_error = 0.0;
};
TransportResult logistic_transport(const Chart& chart, const std::vector<double>& x0, int rho_index,
                                   double t_min, double t_max, int samples, double tol = 1e-12);

// ---- curves ----
struct CurveState {
  std::vector<double> x, v, a;  // position, velocity, coordinate acceleration
  double t = 0.0;
};
struct Trajectory {
  std::vector<CurveState> states;
  bool exited = false;  // left the chart window (or the fields' domain)
  double exit_time = 0.0;
};
using ScalarOfTime = std::function<double(double)>;
// x'' + Gamma(x', x') = alpha x' + beta J x' by adaptive Dormand-Prince with
// dense output, sampled at `samples` equally spaced times.
Trajectory integrate_jplanar(const Chart& chart, const CurveState& start, const ScalarOfTime& alpha,
                             const ScalarOfTime& beta, double T, double tol, int samples = 201);
// Max over the trajectory of the part of nabla_x' x' (connection of `metric_chart`)
// orthogonal to span{x', J x'}, relative to 1 + |x'|^2.
struct PlanarityResult {
  double residual = 0.0;
  int degenerate = 0;  // samples where x', J x' failed to span a nondegenerate plane
  int samples = 0;
};
PlanarityResult jplanarity_residual(const Trajectory& tr, const Chart& metric_chart);
// Same chart with g replaced by the partner metric (det A)^(-1/2) g(A^-1 ., .).
Chart partner_chart(const Chart& chart);

// ---- eigenvalue ODEs ----
enum class EigenOde { Elliptic, Logistic, Parabolic };  // rho^2 + 1, rho (1 - rho), rho^2
std::string ode_name(EigenOde k);
std::complex<double> ode_rhs(EigenOde k, std::complex<double> z);
std::vector<std::complex<double>> fixed_points(EigenOde k);

struct PhasePortraitSample {
  EigenOde ode = EigenOde::Logistic;
  std::vector<double> t;
  std::vector<std::complex<double>> rho;
  bool blew_up = false;
  double blowup_time = 0.0;  // estimate when blew_up
};
PhasePortraitSample eigenvalue_flow(EigenOde ode, std::complex<double> rho0, double T,
                                    int samples = 401, double tol = 1e-12);
struct CircleFit {
  std::complex<double> center;
  double radius = 0.0;
  double residual = 0.0;  // max | |z - c| - r |
};
CircleFit circle_fit(const std::vector<std::complex<double>>& z);

// ---- volume of the leaves orthogonal to the eigenvalue directions ----
// f = 1/2 tr(g2^-1 L_v2 g2) on the leaf coordinates (every coordinate not named rho*).
double volume_prediction(double C, int m0, int m1, bool kahler);
ResidualReport volume_coefficient(SampleBatch& batch, double predicted, double tol);
std::vector<int> rho_coordinates(const Chart& chart);

// ---- blow-up scans ----
struct BlowupScan {
  std::string kind;
  std::vector<double> distance, value;  // distance to the singular locus, scalar
  double exponent = 0.0;                // -d ln|value| / d ln distance on the tail
  double tail_variation = 0.0;          // max |value| variation over the last decade
  bool monotone = false;                // |value| increases along the tail
  bool diverges = false;
};
// f'(rho_1) of a glued 2x2 (3x3) Jordan block: `others` are (rho_i, F_i(rho_i)).
double jordan_curvature_eigenvalue(int size, double F1, double dF1, double x,
                                   double rho1, const std::vector<double>& rho,
                                   const std::vector<double>& F);
// lambda of two simple eigenvalues with common F.
double lambda_two(const ScalarFn& F, double r1, double r2);
// The same lambda as 1/(4 d^3) int_{r2}^{r1} (s - r2)(r1 - s) F'''(s) ds, d = r1 - r2:
// free of the cancellation the closed form suffers as r1 - r2 -> 0.
double lambda_two_peano(const ScalarFn& F, double r1, double r2);
BlowupScan blowup_jordan(int size, const ScalarFn& F1, double rho1, const std::vector<double>& rho,
                         const std::vector<double>& F, int decades = 5, int per_decade = 4);
// (rho1, rho2) = corner + sign * d (1, 2), corner 0 (sign +) or 1 (sign -).
BlowupScan blowup_ell2(const ScalarFn& F, double corner, int decades = 5, int per_decade = 4);

}  // namespace cpg
