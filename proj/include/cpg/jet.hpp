#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cpg {

inline constexpr int kMaxDim = 8;
inline constexpr int kMaxOrder = 3;
inline constexpr int kMaxCoeffs = 1 + 8 + 36 + 120;

class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

int coeff_count(int dim, int order);

// Truncated Taylor expansion of a scalar field in `dim` variables up to
// `order` (<= 3). Coefficients are raw partial derivatives; the Hessian and
// third derivatives are stored packed (i <= j, i <= j <= k).
class Jet {
 public:
  Jet() : dim_(0), order_(0), n_(1) { c_[0] = 0.0; }
  Jet(double v) : dim_(0), order_(0), n_(1) { c_[0] = v; }  // NOLINT
  Jet(const Jet& o) : dim_(o.dim_), order_(o.order_), n_(o.n_) { copy_from(o); }
  Jet& operator=(const Jet& o) {
    dim_ = o.dim_;
    order_ = o.order_;
    n_ = o.n_;
    copy_from(o);
    return *this;
  }

  static Jet constant(double v, int dim, int order);
  static Jet seed(int index, double value, int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  bool is_scalar() const { return dim_ == 0; }

  double value() const { return c_[0]; }
  double d(int i) const;
  double d(int i, int j) const;
  double d(int i, int j, int k) const;

  // Jet of the partial derivative along variable i, one order lower.
  Jet partial(int i) const;
  Jet truncated(int order) const;

  const double* coeffs() const { return c_; }
  double* coeffs() { return c_; }
  int size() const { return n_; }

  Jet& operator+=(const Jet& b);
  Jet& operator-=(const Jet& b);
  Jet& operator*=(const Jet& b);
  Jet& operator/=(const Jet& b);
  Jet& operator+=(double b) {
    c_[0] += b;
    return *this;
  }
  Jet& operator-=(double b) {
    c_[0] -= b;
    return *this;
  }
  Jet& operator*=(double b);
  Jet& operator/=(double b);
  Jet operator-() const;

  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet compose(const Jet& a, double f0, double f1, double f2, double f3);

 private:
  void copy_from(const Jet& o) {
    for (int i = 0; i < n_; ++i) c_[i] = o.c_[i];
  }
  void reshape(int dim, int order);

  std::uint8_t dim_;
  std::uint8_t order_;
  std::uint16_t n_;
  double c_[kMaxCoeffs];
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(const Jet& a, const Jet& b);
inline Jet operator/(Jet a, const Jet& b) { return a /= b; }
inline Jet operator+(Jet a, double b) { return a += b; }
inline Jet operator+(double b, Jet a) { return a += b; }
inline Jet operator-(Jet a, double b) { return a -= b; }
inline Jet operator-(double b, const Jet& a) { return -a + b; }
inline Jet operator*(Jet a, double b) { return a *= b; }
inline Jet operator*(double b, Jet a) { return a *= b; }
inline Jet operator/(Jet a, double b) { return a /= b; }
Jet operator/(double b, const Jet& a);

// f(a) given f and its first three derivatives at a.value().
Jet compose(const Jet& a, double f0, double f1, double f2, double f3);

Jet inv(const Jet& a);
Jet pow(const Jet& a, double p);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sqrt(const Jet& a);

// Complex-valued jet, used for holomorphic polynomials of z = x + i y.
struct CJet {
  Jet re;
  Jet im;

  CJet() = default;
  CJet(Jet r, Jet i) : re(std::move(r)), im(std::move(i)) {}
  CJet(double r, double i = 0.0) : re(r), im(i) {}  // NOLINT

  CJet conj() const { return {re, -im}; }
  CJet& operator+=(const CJet& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  CJet& operator-=(const CJet& b) {
    re -= b.re;
    im -= b.im;
    return *this;
  }
};

inline CJet operator+(CJet a, const CJet& b) { return a += b; }
inline CJet operator-(CJet a, const CJet& b) { return a -= b; }
inline CJet operator-(const CJet& a) { return {-a.re, -a.im}; }
inline CJet operator*(const CJet& a, const CJet& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline CJet operator*(const CJet& a, double s) { return {a.re * s, a.im * s}; }
CJet operator/(const CJet& a, const CJet& b);

}  // namespace cpg
