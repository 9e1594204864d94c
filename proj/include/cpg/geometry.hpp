#pragma once

#include <vector>

#include "cpg/chart.hpp"
#include "cpg/linalg.hpp"

namespace cpg {

// Gamma^a_{bc}, one jet order below the metric.
struct Christoffel {
  int n = 0;
  std::vector<Jet> c;
  Jet& operator()(int a, int b, int d) { return c[(a * n + b) * n + d]; }
  const Jet& operator()(int a, int b, int d) const { return c[(a * n + b) * n + d]; }
};

// R^a_{bcd} with R(d_c, d_d) d_b = R^a_{bcd} d_a and
// R(u,v) = nabla_u nabla_v - nabla_v nabla_u - nabla_[u,v].
struct Riemann {
  int n = 0;
  std::vector<Jet> r;
  Jet& operator()(int a, int b, int c, int d) { return r[((a * n + b) * n + c) * n + d]; }
  const Jet& operator()(int a, int b, int c, int d) const {
    return r[((a * n + b) * n + c) * n + d];
  }
};

Christoffel christoffel(const JMat& g, const JMat& ginv);
Riemann riemann(const Christoffel& gamma);

// Entry a is the matrix (nabla_a A)^b_c.
std::vector<JMat> covariant_derivative_endo(const JMat& A, const Christoffel& gamma);
// Entry a is the matrix (nabla_a T)_bc of a (0,2)-tensor.
std::vector<JMat> covariant_derivative_form(const JMat& T, const Christoffel& gamma);
// Matrix (nabla_a w)^b stored at (b, a).
JMat covariant_derivative_vector(const JVec& w, const Christoffel& gamma);
// nabla_u w.
JVec covariant_derivative_along(const JVec& u, const JVec& w, const Christoffel& gamma);

Jet lie_derivative(const Jet& f, const JVec& v);
JVec lie_bracket(const JVec& v, const JVec& w);  // [v, w]
JMat lie_derivative_form(const JMat& T, const JVec& v);
JMat lie_derivative_endo(const JMat& A, const JVec& v);

// (d omega)_abc flattened as (a * n + b) * n + c.
std::vector<Jet> exterior_derivative_2form(const JMat& omega);
JVec differential(const Jet& f);
JVec gradient(const Jet& f, const JMat& ginv);
JMat hessian(const Jet& f, const Christoffel& gamma);

// Numeric curvature endomorphism R(d_c, d_d) as a matrix (row a, column b).
Eigen::MatrixXd curvature_endo(const Riemann& R, int c, int d);
// Bivector extension: X = u^flat (x) v - v^flat (x) u maps to R(u, v).
Eigen::MatrixXd curvature_on_bivector(const Riemann& R, const Eigen::MatrixXd& X,
                                      const Eigen::MatrixXd& ginv);
// Kahler normalization R(u,v) = 1/4 R(u wedge_J v): twice the bivector extension.
Eigen::MatrixXd curvature_on_endo(const Riemann& R, const Eigen::MatrixXd& X,
                                  const Eigen::MatrixXd& ginv);

// Cached per-point quantities shared by the check suites.
const JMat& ginv_of(Point& p);
const Christoffel& gamma_of(Point& p);
const Riemann& riemann_of(Point& p);

double rel(double residual, double scale);

}  // namespace cpg
