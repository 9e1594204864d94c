#include "cpg/linalg.hpp"

#include <algorithm>
#include <utility>

namespace cpg {
namespace {

void require_same(const JMat& a, const JMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix shape mismatch");
}

Jet zero_like(const Jet& proto) { return Jet::constant(0.0, proto.dim(), proto.order()); }

}  // namespace

JMat jidentity(int n, const Jet& proto) {
  JMat m = jzero(n, n, proto);
  for (int i = 0; i < n; ++i) m(i, i) += 1.0;
  return m;
}

JMat jzero(int rows, int cols, const Jet& proto) { return JMat(rows, cols, zero_like(proto)); }

JMat transpose(const JMat& a) {
  JMat t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

JMat operator*(const JMat& a, const JMat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
  JMat r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Jet s = a(i, 0) * b(0, j);
      for (int k = 1; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

JMat operator+(const JMat& a, const JMat& b) {
  require_same(a, b);
  JMat r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) += b(i, j);
  return r;
}

JMat operator-(const JMat& a, const JMat& b) {
  require_same(a, b);
  JMat r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) -= b(i, j);
  return r;
}

JMat operator*(const JMat& a, const Jet& s) {
  JMat r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) * s;
  return r;
}

JVec operator*(const JMat& a, const JVec& v) {
  if (a.cols() != static_cast<int>(v.size())) throw std::invalid_argument("matrix-vector shape");
  JVec r(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    Jet s = a(i, 0) * v[0];
    for (int k = 1; k < a.cols(); ++k) s += a(i, k) * v[k];
    r[i] = s;
  }
  return r;
}

JMat truncated(const JMat& a, int order) {
  JMat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).truncated(order);
  return r;
}

JVec truncated(const JVec& v, int order) {
  JVec r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(x.truncated(order));
  return r;
}

JMat partial(const JMat& a, int k) {
  JMat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).partial(k);
  return r;
}

Jet trace(const JMat& a) {
  Jet s = a(0, 0);
  for (int i = 1; i < a.rows(); ++i) s += a(i, i);
  return s;
}

Jet det(const JMat& a) {
  const int n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("det of non-square matrix");
  JMat m = a;
  Jet d = Jet(1.0);
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(m(i, k).value()) > std::abs(m(p, k).value())) p = i;
    if (m(p, k).value() == 0.0) return zero_like(a(0, 0));
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(m(p, j), m(k, j));
      d = -d;
    }
    d *= m(k, k);
    const Jet ipiv = inv(m(k, k));
    for (int i = k + 1; i < n; ++i) {
      const Jet f = m(i, k) * ipiv;
      for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return d;
}

JMat inverse(const JMat& a) {
  const int n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("inverse of non-square matrix");
  JMat m = a;
  JMat r = jidentity(n, a(0, 0));
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j).value()));
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(m(i, k).value()) > std::abs(m(p, k).value())) p = i;
    if (std::abs(m(p, k).value()) <= 1e-14 * std::max(scale, 1e-300))
      throw DomainError("singular matrix");
    if (p != k)
      for (int j = 0; j < n; ++j) {
        std::swap(m(p, j), m(k, j));
        std::swap(r(p, j), r(k, j));
      }
    const Jet ipiv = inv(m(k, k));
    for (int j = 0; j < n; ++j) {
      m(k, j) *= ipiv;
      r(k, j) *= ipiv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const Jet f = m(i, k);
      if (f.value() == 0.0 && f.order() == 0) continue;
      for (int j = 0; j < n; ++j) {
        m(i, j) -= f * m(k, j);
        r(i, j) -= f * r(k, j);
      }
    }
  }
  return r;
}

Jet dot(const JVec& a, const JVec& b) {
  Jet s = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

JVec charpoly(const JMat& a) {
  const int n = a.rows();
  JVec c(n + 1, zero_like(a(0, 0)));
  c[n] = c[n] + 1.0;
  JMat m = jzero(n, n, a(0, 0));
  for (int k = 1; k <= n; ++k) {
    JMat am = a * m;
    for (int i = 0; i < n; ++i) am(i, i) += c[n - k + 1];
    m = am;
    c[n - k] = -trace(a * m) / static_cast<double>(k);
  }
  return c;
}

Eigen::MatrixXd values(const JMat& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j).value();
  return m;
}

Eigen::VectorXd values(const JVec& v) {
  Eigen::VectorXd r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r(i) = v[i].value();
  return r;
}

JMat lift_constant(const Eigen::MatrixXd& m, const Jet& proto) {
  JMat r = jzero(m.rows(), m.cols(), proto);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) += m(i, j);
  return r;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double max_abs(const JMat& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s = std::max(s, std::abs(a(i, j).value()));
  return s;
}

std::vector<std::complex<double>> poly_roots(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1) return {};
  if (c.back() == 0.0) throw std::invalid_argument("leading coefficient vanishes");
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c.back();
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<std::complex<double>> r(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(r.begin(), r.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return r;
}

}  // namespace cpg
