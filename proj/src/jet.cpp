#include "cpg/jet.hpp"

#include <cmath>
#include <vector>

namespace cpg {
namespace {

struct Pair {
  int i, j, idx;
};
struct Triple {
  int i, j, k, idx;
};

struct Layout {
  int dim = 0;
  int h0 = 0;  // offset of packed Hessian
  int t0 = 0;  // offset of packed third derivatives
  int count[4] = {0, 0, 0, 0};
  std::uint16_t h[kMaxDim][kMaxDim] = {};
  std::uint16_t t[kMaxDim][kMaxDim][kMaxDim] = {};
  std::vector<Pair> pairs;
  std::vector<Triple> triples;
};

std::array<Layout, kMaxDim + 1> make_layouts() {
  std::array<Layout, kMaxDim + 1> out;
  for (int d = 0; d <= kMaxDim; ++d) {
    Layout& L = out[d];
    L.dim = d;
    L.h0 = 1 + d;
    int idx = L.h0;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        L.h[i][j] = L.h[j][i] = static_cast<std::uint16_t>(idx);
        L.pairs.push_back({i, j, idx});
        ++idx;
      }
    L.t0 = idx;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j)
        for (int k = j; k < d; ++k) {
          const auto v = static_cast<std::uint16_t>(idx);
          L.t[i][j][k] = L.t[i][k][j] = L.t[j][i][k] = v;
          L.t[j][k][i] = L.t[k][i][j] = L.t[k][j][i] = v;
          L.triples.push_back({i, j, k, idx});
          ++idx;
        }
    L.count[0] = 1;
    L.count[1] = 1 + d;
    L.count[2] = L.t0;
    L.count[3] = idx;
  }
  return out;
}

const std::array<Layout, kMaxDim + 1>& layouts() {
  static const auto tables = make_layouts();
  return tables;
}

void check_shape(int dim, int order) {
  if (dim < 0 || dim > kMaxDim) throw std::invalid_argument("jet dimension out of range");
  if (order < 0 || order > kMaxOrder) throw std::invalid_argument("jet order out of range");
}

// Shape of a binary result. Scalars (dim 0) promote; mismatched orders truncate
// to the lower one, which is exact through that order.
void binary_shape(const Jet& a, const Jet& b, int& dim, int& order) {
  if (a.is_scalar()) {
    dim = b.dim();
    order = b.order();
    return;
  }
  if (b.is_scalar()) {
    dim = a.dim();
    order = a.order();
    return;
  }
  if (a.dim() != b.dim()) throw std::invalid_argument("jet dimension mismatch");
  dim = a.dim();
  order = std::min(a.order(), b.order());
}

}  // namespace

int coeff_count(int dim, int order) {
  check_shape(dim, order);
  return layouts()[dim].count[order];
}

void Jet::reshape(int dim, int order) {
  dim_ = static_cast<std::uint8_t>(dim);
  order_ = static_cast<std::uint8_t>(order);
  n_ = static_cast<std::uint16_t>(coeff_count(dim, order));
}

Jet Jet::constant(double v, int dim, int order) {
  check_shape(dim, order);
  Jet r;
  r.reshape(dim, order);
  for (int i = 0; i < r.n_; ++i) r.c_[i] = 0.0;
  r.c_[0] = v;
  return r;
}

Jet Jet::seed(int index, double value, int dim, int order) {
  if (index < 0 || index >= dim) throw std::out_of_range("jet seed index out of range");
  Jet r = constant(value, dim, order);
  if (order >= 1) r.c_[1 + index] = 1.0;
  return r;
}

double Jet::d(int i) const {
  if (order_ < 1 || i < 0 || i >= dim_) return 0.0;
  return c_[1 + i];
}

double Jet::d(int i, int j) const {
  if (order_ < 2 || i < 0 || j < 0 || i >= dim_ || j >= dim_) return 0.0;
  return c_[layouts()[dim_].h[i][j]];
}

double Jet::d(int i, int j, int k) const {
  if (order_ < 3 || i < 0 || j < 0 || k < 0 || i >= dim_ || j >= dim_ || k >= dim_) return 0.0;
  return c_[layouts()[dim_].t[i][j][k]];
}

Jet Jet::partial(int i) const {
  if (order_ < 1) throw std::invalid_argument("partial of an order-0 jet");
  if (i < 0 || i >= dim_) throw std::out_of_range("partial index out of range");
  const Layout& L = layouts()[dim_];
  Jet r;
  r.reshape(dim_, order_ - 1);
  r.c_[0] = c_[1 + i];
  if (order_ >= 2)
    for (int j = 0; j < dim_; ++j) r.c_[1 + j] = c_[L.h[i][j]];
  if (order_ >= 3)
    for (const Pair& p : L.pairs) r.c_[p.idx] = c_[L.t[i][p.i][p.j]];
  return r;
}

Jet Jet::truncated(int order) const {
  if (order >= order_ || is_scalar()) return *this;
  Jet r;
  r.reshape(dim_, order);
  for (int i = 0; i < r.n_; ++i) r.c_[i] = c_[i];
  return r;
}

Jet& Jet::operator+=(const Jet& b) {
  int dim, order;
  binary_shape(*this, b, dim, order);
  if (b.is_scalar()) {
    c_[0] += b.c_[0];
    return *this;
  }
  if (is_scalar()) {
    const double v = c_[0];
    *this = b;
    c_[0] += v;
    return *this;
  }
  reshape(dim, order);
  for (int i = 0; i < n_; ++i) c_[i] += b.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& b) {
  if (b.is_scalar()) {
    c_[0] -= b.c_[0];
    return *this;
  }
  return *this += -b;
}

Jet& Jet::operator*=(const Jet& b) { return *this = *this * b; }

Jet& Jet::operator/=(const Jet& b) {
  if (b.is_scalar()) return *this /= b.c_[0];
  return *this = *this * inv(b);
}

Jet& Jet::operator*=(double b) {
  for (int i = 0; i < n_; ++i) c_[i] *= b;
  return *this;
}

Jet& Jet::operator/=(double b) {
  if (b == 0.0) throw DomainError("jet division by zero");
  return *this *= 1.0 / b;
}

Jet Jet::operator-() const {
  Jet r(*this);
  for (int i = 0; i < n_; ++i) r.c_[i] = -r.c_[i];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.is_scalar()) return b * a.c_[0];
  if (b.is_scalar()) return a * b.c_[0];
  int dim, order;
  binary_shape(a, b, dim, order);
  const Layout& L = layouts()[dim];
  Jet r;
  r.reshape(dim, order);
  const double* x = a.c_;
  const double* y = b.c_;
  double* z = r.c_;
  const double x0 = x[0], y0 = y[0];
  z[0] = x0 * y0;
  if (order >= 1)
    for (int i = 1; i <= dim; ++i) z[i] = x0 * y[i] + x[i] * y0;
  if (order >= 2)
    for (const auto& p : L.pairs) {
      const int i = 1 + p.i, j = 1 + p.j;
      z[p.idx] = x0 * y[p.idx] + x[p.idx] * y0 + x[i] * y[j] + x[j] * y[i];
    }
  if (order >= 3)
    for (const auto& t : L.triples) {
      const int i = 1 + t.i, j = 1 + t.j, k = 1 + t.k;
      const int jk = L.h[t.j][t.k], ik = L.h[t.i][t.k], ij = L.h[t.i][t.j];
      z[t.idx] = x0 * y[t.idx] + x[t.idx] * y0 + x[i] * y[jk] + x[j] * y[ik] + x[k] * y[ij] +
                 x[jk] * y[i] + x[ik] * y[j] + x[ij] * y[k];
    }
  return r;
}

Jet compose(const Jet& a, double f0, double f1, double f2, double f3) {
  const Layout& L = layouts()[a.dim_];
  Jet r;
  r.reshape(a.dim_, a.order_);
  const double* x = a.c_;
  double* z = r.c_;
  z[0] = f0;
  if (a.order_ >= 1)
    for (int i = 1; i <= a.dim_; ++i) z[i] = f1 * x[i];
  if (a.order_ >= 2)
    for (const auto& p : L.pairs) z[p.idx] = f2 * x[1 + p.i] * x[1 + p.j] + f1 * x[p.idx];
  if (a.order_ >= 3)
    for (const auto& t : L.triples) {
      const double xi = x[1 + t.i], xj = x[1 + t.j], xk = x[1 + t.k];
      z[t.idx] = f3 * xi * xj * xk +
                 f2 * (xi * x[L.h[t.j][t.k]] + xj * x[L.h[t.i][t.k]] + xk * x[L.h[t.i][t.j]]) +
                 f1 * x[t.idx];
    }
  return r;
}

Jet operator/(double b, const Jet& a) { return inv(a) * b; }

Jet inv(const Jet& a) {
  const double v = a.value();
  if (v == 0.0) throw DomainError("jet division by zero");
  const double r = 1.0 / v;
  return compose(a, r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

Jet pow(const Jet& a, double p) {
  const double v = a.value();
  const bool integral = std::floor(p) == p;
  if (!integral && v <= 0.0) throw DomainError("pow of non-positive base with non-integer exponent");
  if (integral && p < 0.0 && v == 0.0) throw DomainError("negative power of zero");
  auto term = [&](double q) { return (integral || v > 0.0) ? std::pow(v, q) : 0.0; };
  const double f0 = term(p);
  const double f1 = p == 0.0 ? 0.0 : p * term(p - 1.0);
  const double f2 = (p == 0.0 || p == 1.0) ? 0.0 : p * (p - 1.0) * term(p - 2.0);
  const double f3 =
      (p == 0.0 || p == 1.0 || p == 2.0) ? 0.0 : p * (p - 1.0) * (p - 2.0) * term(p - 3.0);
  return compose(a, f0, f1, f2, f3);
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return compose(a, e, e, e, e);
}

Jet log(const Jet& a) {
  const double v = a.value();
  if (v <= 0.0) throw DomainError("log of non-positive value");
  return compose(a, std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return compose(a, s, c, -s, -c);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return compose(a, c, -s, -c, s);
}

Jet sqrt(const Jet& a) {
  const double v = a.value();
  if (v < 0.0 || (v == 0.0 && a.order() > 0 && !a.is_scalar()))
    throw DomainError("sqrt outside its domain");
  const double s = std::sqrt(v);
  if (v == 0.0) return Jet(0.0);
  return compose(a, s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v));
}

CJet operator/(const CJet& a, const CJet& b) {
  const Jet den = b.re * b.re + b.im * b.im;
  if (den.value() == 0.0) throw DomainError("complex jet division by zero");
  const Jet iden = inv(den);
  return {(a.re * b.re + a.im * b.im) * iden, (a.im * b.re - a.re * b.im) * iden};
}

}  // namespace cpg
