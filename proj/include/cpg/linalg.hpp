#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "cpg/jet.hpp"

namespace cpg {

// Small dense row-major matrix over jets (or doubles).
template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, const T& fill = T()) : r_(rows), c_(cols), a_(rows * cols, fill) {}

  int rows() const { return r_; }
  int cols() const { return c_; }
  bool empty() const { return a_.empty(); }
  T& operator()(int i, int j) { return a_[i * c_ + j]; }
  const T& operator()(int i, int j) const { return a_[i * c_ + j]; }

 private:
  int r_ = 0, c_ = 0;
  std::vector<T> a_;
};

using JMat = Mat<Jet>;
using JVec = std::vector<Jet>;

JMat jidentity(int n, const Jet& proto);
JMat jzero(int rows, int cols, const Jet& proto);
JMat transpose(const JMat& a);
JMat operator*(const JMat& a, const JMat& b);
JMat operator+(const JMat& a, const JMat& b);
JMat operator-(const JMat& a, const JMat& b);
JMat operator*(const JMat& a, const Jet& s);
JVec operator*(const JMat& a, const JVec& v);
JMat truncated(const JMat& a, int order);
JVec truncated(const JVec& v, int order);
JMat partial(const JMat& a, int i);
Jet trace(const JMat& a);
Jet det(const JMat& a);
JMat inverse(const JMat& a);
Jet dot(const JVec& a, const JVec& b);
// Coefficients of det(t I - A) as c[k] * t^k, k = 0..n.
JVec charpoly(const JMat& a);

Eigen::MatrixXd values(const JMat& a);
Eigen::VectorXd values(const JVec& v);
JMat lift_constant(const Eigen::MatrixXd& m, const Jet& proto);

double max_abs(const Eigen::MatrixXd& m);
double max_abs(const JMat& a);

// Roots of sum_k c[k] t^k (c.back() != 0) via the companion matrix.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& c);

}  // namespace cpg
