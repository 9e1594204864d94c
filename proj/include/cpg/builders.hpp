#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "cpg/chart.hpp"

namespace cpg {

// Smooth function of one variable known through its first three derivatives.
class ScalarFn {
 public:
  using Derivs = std::array<double, 4>;

  ScalarFn() = default;
  ScalarFn(std::function<Derivs(double)> d, std::string description)
      : d_(std::move(d)), desc_(std::move(description)) {}

  static ScalarFn polynomial(std::vector<double> coeffs);
  // a (1 - t)^(-C) t^p
  static ScalarFn power_law(double a, double C, double p);

  Derivs derivs(double t) const { return d_(t); }
  double operator()(double t) const { return d_(t)[0]; }
  Jet operator()(const Jet& t) const;
  const std::string& description() const { return desc_; }
  explicit operator bool() const { return static_cast<bool>(d_); }

 private:
  std::function<Derivs(double)> d_;
  std::string desc_;
};

Jet poly_eval(const std::vector<double>& c, const Jet& x);
CJet poly_eval(const std::vector<std::complex<double>>& c, const CJet& z);

// Real eigenvalue rho(x) with sign eps: contributes eps * Delta dx^2.
struct RealBlock {
  int eps = 1;
  std::vector<double> rho;  // coefficients, lowest degree first
};
// Complex eigenvalue rho(z), z = x + i y: contributes -1/4 (Delta dz^2 + c.c.).
struct ComplexBlock {
  std::vector<std::complex<double>> rho;
};
// Eigenvalue used as the coordinate: contributes Delta / F(rho) drho^2.
struct RhoBlock {
  ScalarFn F;
};
// Jordan block of size 2 (coordinates x, rho) or 3 (x1, x2, rho).
struct JordanBlock {
  int size = 2;
  ScalarFn F;
};
using Block = std::variant<RealBlock, ComplexBlock, RhoBlock, JordanBlock>;

struct PairSpec {
  std::vector<Block> blocks;
  std::vector<double> lo, hi;  // window in quotient coordinates
  double margin = 0.05;
};

struct ConstantBlock {
  double c = 0.0;
  int dim = 2;
  std::vector<int> signature;  // one sign per complex coordinate (per real one if projective)
};

class QuotientPair {
 public:
  explicit QuotientPair(PairSpec spec);

  struct Eval {
    JMat h, L;
    JVec mu;               // mu_0 = 1, ..., mu_n of all eigenvalues with multiplicity
    std::vector<CJet> ev;  // eigenvalues with multiplicity
  };

  int dim() const { return dim_; }
  int ell() const { return dim_; }
  const PairSpec& spec() const { return spec_; }
  std::vector<std::string> coord_names() const;
  // q: jets of the quotient coordinates, possibly embedded in a larger chart.
  Eval eval(const JVec& q) const;
  // Throws std::invalid_argument when the window violates the block hypotheses.
  void validate(const std::vector<double>& constants) const;
  bool has_jordan() const;

 private:
  PairSpec spec_;
  int dim_ = 0;
};

// Projective chart (g = h, A = L) of a compatible pair.
Chart build_quotient_pair(const PairSpec& spec);
Chart lift_nonconstant(const PairSpec& spec);
Chart lift_with_constant_block(const PairSpec& spec, const std::vector<ConstantBlock>& cb,
                               double window = 0.5);
Chart build_main_example(const PairSpec& spec, const std::vector<ConstantBlock>& cb,
                         double window = 0.5);

Eigen::MatrixXd constant_block_metric(const std::vector<ConstantBlock>& cb);
Eigen::MatrixXd constant_block_complex_structure(const std::vector<ConstantBlock>& cb);

struct Mobility2 {
  Chart chart;
  std::vector<double> T;  // row-major l x l, v^t = T t
  std::vector<double> s;  // per constant block, v^y = s y
  double fit_residual = 0.0;
  double C = 0.0;
};

struct Mobility2Spec {
  int ell = 1;
  std::vector<double> a;
  double C = -0.5;
  std::vector<ConstantBlock> cb;
  bool kahler = true;
  std::vector<double> rho_lo, rho_hi;  // per-eigenvalue window, inside (0, 1)
  double window = 0.5;
};

Mobility2 build_mobility2(const Mobility2Spec& spec);

// g = drho^2/F + F theta^2 + g_c((A_c - rho).,.) with F = -4B(1-rho)rho
// (Kahler), or drho^2/F + g_c((A_c - rho).,.) (projective).
Chart build_final_metric(double B, const std::vector<ConstantBlock>& cb, bool kahler,
                         double rho_lo, double rho_hi, double window = 0.5);

// Quintic Hermite interpolant through values, first and second derivatives.
class QuinticSpline {
 public:
  QuinticSpline() = default;
  QuinticSpline(std::vector<double> x, std::vector<double> y, std::vector<double> dy,
                std::vector<double> d2y);
  ScalarFn::Derivs derivs(double t) const;
  ScalarFn as_function(std::string description) const;
  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }
  const std::vector<double>& nodes() const { return x_; }

 private:
  std::vector<double> x_, y_, dy_, d2y_;
};

struct JordanOdeSpec {
  int size = 2;  // 2 or 3; size 1 is the scalar analogue F' = (n+1+C - (n+1) rho...) F
  int n2 = 1;
  double C = -0.5;
  double rho0 = 0.5;
  double rho_lo = 0.2, rho_hi = 0.8;
  std::vector<double> init;  // F, G1[, H1] at rho0
  int nodes = 401;
  double tol = 1e-13;
};

struct JordanOdeSolution {
  JordanOdeSpec spec;
  QuinticSpline F, G1, H1;
  std::function<std::vector<double>(double, const std::vector<double>&)> rhs;
  std::vector<QuinticSpline> components() const;
};

JordanOdeSolution solve_jordan_odes(const JordanOdeSpec& spec);
// F' = F (n + 1 + C - (n + 1) ... ) for the 1 x 1 block with n other eigenvalues:
// the scalar analogue, solved by the same integrator.
QuinticSpline solve_scalar_ode(int n, double C, double rho0, double F0, double lo, double hi,
                               int nodes = 401, double tol = 1e-13);

// Max over interior points between the nodes of |y' - rhs(rho, y)| relative to
// 1 + |rhs|, and the spread max G1 - min G1 over the same points.
struct OdeResidual {
  double residual = 0.0, g1_spread = 0.0;
  int samples = 0;
};
OdeResidual jordan_ode_residual(const JordanOdeSolution& s, int per_interval = 3);

struct JordanChartSpec {
  JordanOdeSolution ode;
  std::vector<double> a;  // weights of the additional real eigenvalues
  std::vector<double> lo, hi;  // window in (x[, x2], rho_1, rho_2, ...)
  bool with_field = true;
};

// Jordan block alone with n2 passed to the block field equations.
Chart build_jordan_block(const JordanOdeSolution& ode, const std::vector<double>& lo,
                         const std::vector<double>& hi);
// Jordan block glued to ode.spec.n2 real eigenvalues with F_i = a_i (1-t)^-C t^(l+2+C).
Chart build_jordan_pair(const JordanChartSpec& spec);

}  // namespace cpg
