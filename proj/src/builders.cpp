#include "cpg/builders.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace cpg {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int block_dim(const Block& b) {
  return std::visit(overloaded{[](const RealBlock&) { return 1; },
                               [](const ComplexBlock&) { return 2; },
                               [](const RhoBlock&) { return 1; },
                               [](const JordanBlock& j) { return j.size; }},
                    b);
}

Jet zero_of(const Jet& proto) { return Jet::constant(0.0, proto.dim(), proto.order()); }

std::vector<double> poly_derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
  if (d.empty()) d.push_back(0.0);
  return d;
}

std::vector<std::complex<double>> poly_derivative(const std::vector<std::complex<double>>& c) {
  std::vector<std::complex<double>> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
  if (d.empty()) d.push_back(0.0);
  return d;
}

// Elementary symmetric polynomials e_0..e_m of a list of complex jets.
std::vector<CJet> elementary(const std::vector<CJet>& xs, const Jet& proto) {
  std::vector<CJet> e(xs.size() + 1, CJet(zero_of(proto), zero_of(proto)));
  e[0].re += 1.0;
  for (std::size_t k = 0; k < xs.size(); ++k)
    for (std::size_t j = k + 1; j >= 1; --j) e[j] = e[j] + e[j - 1] * xs[k];
  return e;
}

std::vector<double> lin_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1.0));
  return g;
}

int total_constant_dim(const std::vector<ConstantBlock>& cb) {
  int n = 0;
  for (const auto& b : cb) n += b.dim;
  return n;
}

}  // namespace

Jet ScalarFn::operator()(const Jet& t) const {
  const Derivs d = d_(t.value());
  return compose(t, d[0], d[1], d[2], d[3]);
}

ScalarFn ScalarFn::polynomial(std::vector<double> c) {
  std::ostringstream os;
  os << "polynomial(" << c.size() << " coefficients)";
  return ScalarFn(
      [c](double t) {
        Jet x = Jet::seed(0, t, 1, 3);
        Jet p = poly_eval(c, x);
        return Derivs{p.value(), p.d(0), p.d(0, 0), p.d(0, 0, 0)};
      },
      os.str());
}

ScalarFn ScalarFn::power_law(double a, double C, double p) {
  std::ostringstream os;
  os << a << "*(1-t)^(" << -C << ")*t^(" << p << ")";
  return ScalarFn(
      [a, C, p](double t) {
        if (t <= 0.0 || t >= 1.0) throw DomainError("power law evaluated outside (0, 1)");
        Jet x = Jet::seed(0, t, 1, 3);
        Jet f = a * pow(1.0 - x, -C) * pow(x, p);
        return Derivs{f.value(), f.d(0), f.d(0, 0), f.d(0, 0, 0)};
      },
      os.str());
}

Jet poly_eval(const std::vector<double>& c, const Jet& x) {
  Jet r = zero_of(x) + c.back();
  for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) r = r * x + c[k];
  return r;
}

CJet poly_eval(const std::vector<std::complex<double>>& c, const CJet& z) {
  const Jet zero = zero_of(z.re);
  CJet r(zero + c.back().real(), zero + c.back().imag());
  for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k)
    r = r * z + CJet(zero + c[k].real(), zero + c[k].imag());
  return r;
}

QuotientPair::QuotientPair(PairSpec spec) : spec_(std::move(spec)) {
  for (const auto& b : spec_.blocks) dim_ += block_dim(b);
  if (dim_ == 0) throw std::invalid_argument("compatible pair needs at least one block");
  if (static_cast<int>(spec_.lo.size()) != dim_ || static_cast<int>(spec_.hi.size()) != dim_)
    throw std::invalid_argument("window dimension does not match the blocks");
  int jordan = 0;
  for (const auto& b : spec_.blocks)
    if (const auto* j = std::get_if<JordanBlock>(&b)) {
      ++jordan;
      if (j->size != 2 && j->size != 3) throw std::invalid_argument("Jordan blocks have size 2 or 3");
      if (!j->F) throw std::invalid_argument("Jordan block needs F");
    }
  if (jordan > 1) throw std::invalid_argument("at most one Jordan block is supported");
  if (jordan == 1)
    for (const auto& b : spec_.blocks)
      if (std::holds_alternative<ComplexBlock>(b))
        throw std::invalid_argument("Jordan blocks glue to real eigenvalues only");
}

bool QuotientPair::has_jordan() const {
  for (const auto& b : spec_.blocks)
    if (std::holds_alternative<JordanBlock>(b)) return true;
  return false;
}

std::vector<std::string> QuotientPair::coord_names() const {
  std::vector<std::string> names;
  int i = 0;
  for (const auto& b : spec_.blocks) {
    ++i;
    const std::string s = std::to_string(i);
    std::visit(overloaded{[&](const RealBlock&) { names.push_back("x" + s); },
                          [&](const ComplexBlock&) {
                            names.push_back("x" + s);
                            names.push_back("y" + s);
                          },
                          [&](const RhoBlock&) { names.push_back("rho" + s); },
                          [&](const JordanBlock& j) {
                            if (j.size == 2) {
                              names.push_back("x");
                            } else {
                              names.push_back("x1");
                              names.push_back("x2");
                            }
                            names.push_back("rho" + s);
                          }},
               b);
  }
  return names;
}

QuotientPair::Eval QuotientPair::eval(const JVec& q) const {
  if (static_cast<int>(q.size()) != dim_) throw std::invalid_argument("quotient coordinate count");
  const Jet zero = zero_of(q[0]);
  struct Info {
    CJet rho;
    int offset;
    int first_ev;  // index into ev of this block's own eigenvalue
  };
  std::vector<Info> info;
  Eval out;
  int off = 0;
  for (const auto& b : spec_.blocks) {
    Info in{CJet(zero, zero), off, static_cast<int>(out.ev.size())};
    std::visit(overloaded{[&](const RealBlock& r) {
                            in.rho = CJet(poly_eval(r.rho, q[off]), zero);
                            out.ev.push_back(in.rho);
                          },
                          [&](const ComplexBlock& c) {
                            in.rho = poly_eval(c.rho, CJet(q[off], q[off + 1]));
                            out.ev.push_back(in.rho);
                            out.ev.push_back(in.rho.conj());
                          },
                          [&](const RhoBlock&) {
                            in.rho = CJet(q[off], zero);
                            out.ev.push_back(in.rho);
                          },
                          [&](const JordanBlock& j) {
                            in.rho = CJet(q[off + j.size - 1], zero);
                            for (int k = 0; k < j.size; ++k) out.ev.push_back(in.rho);
                          }},
               b);
    info.push_back(in);
    off += block_dim(b);
  }
  const int n = dim_;
  out.h = jzero(n, n, zero);
  out.L = jzero(n, n, zero);
  for (std::size_t s = 0; s < spec_.blocks.size(); ++s) {
    const Info& in = info[s];
    const int o = in.offset;
    // Delta_s: product over the other eigenvalues (with multiplicity)
    auto delta = [&]() {
      CJet d(zero + 1.0, zero);
      for (int k = 0; k < static_cast<int>(out.ev.size()); ++k)
        if (k != in.first_ev) d = d * (in.rho - out.ev[k]);
      return d;
    };
    std::visit(
        overloaded{
            [&](const RealBlock& r) {
              out.h(o, o) = delta().re * static_cast<double>(r.eps);
              out.L(o, o) = in.rho.re;
            },
            [&](const ComplexBlock&) {
              const CJet d = delta();
              out.h(o, o) = d.re * -0.5;
              out.h(o + 1, o + 1) = d.re * 0.5;
              out.h(o, o + 1) = d.im * 0.5;
              out.h(o + 1, o) = d.im * 0.5;
              out.L(o, o) = in.rho.re;
              out.L(o, o + 1) = -in.rho.im;
              out.L(o + 1, o) = in.rho.im;
              out.L(o + 1, o + 1) = in.rho.re;
            },
            [&](const RhoBlock& r) {
              out.h(o, o) = delta().re / r.F(in.rho.re);
              out.L(o, o) = in.rho.re;
            },
            [&](const JordanBlock& j) {
              const int m = j.size;
              const Jet& rho = in.rho.re;
              const Jet F = j.F(rho);
              JMat h1 = jzero(m, m, zero), L1 = jzero(m, m, zero);
              if (m == 2) {
                const Jet fx = F + q[o];
                h1(0, 1) = fx;
                h1(1, 0) = fx;
                L1(0, 0) = rho;
                L1(0, 1) = fx;
                L1(1, 1) = rho;
              } else {
                const Jet& x1 = q[o];
                const Jet fx = F + 2.0 * q[o + 1];
                h1(0, 2) = fx;
                h1(2, 0) = fx;
                h1(1, 1) = zero + 1.0;
                h1(1, 2) = x1;
                h1(2, 1) = x1;
                h1(2, 2) = x1 * x1;
                L1(0, 0) = rho;
                L1(1, 1) = rho;
                L1(2, 2) = rho;
                L1(0, 1) = zero + 1.0;
                L1(0, 2) = x1;
                L1(1, 2) = fx;
              }
              // h1 * Delta_1(L1), Delta_1(t) = prod over the other eigenvalues (t - rho_j)
              JMat D = jidentity(m, zero);
              for (int k = 0; k < static_cast<int>(out.ev.size()); ++k) {
                if (k >= in.first_ev && k < in.first_ev + m) continue;
                JMat f = L1;
                for (int i = 0; i < m; ++i) f(i, i) -= out.ev[k].re;
                D = D * f;
              }
              const JMat hb = h1 * D;
              for (int i = 0; i < m; ++i)
                for (int jj = 0; jj < m; ++jj) {
                  out.h(o + i, o + jj) = hb(i, jj);
                  out.L(o + i, o + jj) = L1(i, jj);
                }
            }},
        spec_.blocks[s]);
  }
  const auto e = elementary(out.ev, zero);
  for (const auto& c : e) out.mu.push_back(c.re);
  return out;
}

void QuotientPair::validate(const std::vector<double>& constants) const {
  const int n = dim_;
  for (int a = 0; a < n; ++a)
    if (!(spec_.lo[a] < spec_.hi[a])) throw std::invalid_argument("empty window interval");
  // Grid test plus sign tracking: on a connected window a real difference (or
  // the imaginary part of a complex eigenvalue) that keeps clear of zero at the
  // grid points but changes sign between them still crosses zero.
  const int per_axis = n <= 3 ? 9 : n <= 5 ? 5 : 3;
  std::vector<std::vector<double>> axes;
  for (int a = 0; a < n; ++a) axes.push_back(lin_grid(spec_.lo[a], spec_.hi[a], per_axis));
  std::vector<int> idx(n, 0);
  const double margin = spec_.margin;
  std::vector<int> signs;
  bool first = true;
  while (true) {
    std::vector<int> sg;
    const auto track = [&sg](double d) { sg.push_back(d > 0.0 ? 1 : -1); };
    JVec q;
    for (int a = 0; a < n; ++a) q.push_back(Jet::seed(a, axes[a][idx[a]], n, 1));
    std::ostringstream where;
    where << "(";
    for (int a = 0; a < n; ++a) where << (a ? ", " : "") << q[a].value();
    where << ")";
    const Eval ev = eval(q);
    // distinct eigenvalues, away from the constants
    std::vector<std::complex<double>> vals;
    int k = 0;
    for (const auto& b : spec_.blocks) {
      vals.emplace_back(ev.ev[k].re.value(), ev.ev[k].im.value());
      k += std::holds_alternative<ComplexBlock>(b) ? 2
           : std::holds_alternative<JordanBlock>(b) ? std::get<JordanBlock>(b).size
                                                     : 1;
    }
    for (std::size_t i = 0; i < vals.size(); ++i) {
      for (std::size_t j = i + 1; j < vals.size(); ++j)
        if (std::abs(vals[i] - vals[j]) < margin)
          throw std::invalid_argument("eigenvalue collision on the window at " + where.str());
      for (double c : constants)
        if (std::abs(vals[i] - c) < margin)
          throw std::invalid_argument("eigenvalue meets a constant eigenvalue at " + where.str());
    }
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (vals[i].imag() != 0.0) {
        track(vals[i].imag());
        continue;
      }
      for (std::size_t j = i + 1; j < vals.size(); ++j)
        if (vals[j].imag() == 0.0) track(vals[i].real() - vals[j].real());
      for (double c : constants) track(vals[i].real() - c);
    }
    if (first) {
      signs = sg;
      first = false;
    } else if (sg != signs) {
      throw std::invalid_argument("eigenvalues cross each other, a constant or the real axis inside the window near " +
                                  where.str());
    }
    int off = 0;
    for (const auto& b : spec_.blocks) {
      if (const auto* c = std::get_if<ComplexBlock>(&b)) {
        const CJet z(q[off], q[off + 1]);
        const CJet r = poly_eval(c->rho, z);
        if (std::abs(r.im.value()) < margin)
          throw std::invalid_argument("complex eigenvalue nearly real at " + where.str());
        const CJet dr = poly_eval(poly_derivative(c->rho), z);
        if (std::hypot(dr.re.value(), dr.im.value()) < margin)
          throw std::invalid_argument("vanishing d rho at " + where.str());
      } else if (const auto* r = std::get_if<RealBlock>(&b)) {
        if (std::abs(poly_eval(poly_derivative(r->rho), q[off]).value()) < margin)
          throw std::invalid_argument("vanishing d rho at " + where.str());
      } else if (const auto* j = std::get_if<JordanBlock>(&b)) {
        const double rho = q[off + j->size - 1].value();
        const double fx = j->F(rho) + (j->size == 2 ? 1.0 : 2.0) * q[off + j->size - 2].value();
        if (std::abs(fx) < margin)
          throw std::invalid_argument("F + x vanishes on the window at " + where.str());
      } else if (const auto* rb = std::get_if<RhoBlock>(&b)) {
        if (std::abs(rb->F(q[off].value())) < margin * margin)
          throw std::invalid_argument("F vanishes on the window at " + where.str());
      }
      off += block_dim(b);
    }
    int a = 0;
    while (a < n && ++idx[a] == per_axis) idx[a++] = 0;
    if (a == n) break;
  }
}

Chart build_quotient_pair(const PairSpec& spec) {
  auto qp = std::make_shared<QuotientPair>(spec);
  qp->validate({});
  Chart c;
  c.name = "quotient-pair";
  c.kahler = false;
  c.dim = qp->dim();
  c.coords = qp->coord_names();
  c.lo = spec.lo;
  c.hi = spec.hi;
  c.ell = qp->dim();
  c.eval = [qp](const std::vector<double>& x, int order) {
    const QuotientPair::Eval e = qp->eval(seeds(x, order));
    Fields f;
    f.g = e.h;
    f.A = e.L;
    return f;
  };
  return c;
}

Eigen::MatrixXd constant_block_metric(const std::vector<ConstantBlock>& cb) {
  const int n = total_constant_dim(cb);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  int off = 0;
  for (const auto& b : cb) {
    for (int p = 0; p < b.dim / 2; ++p) {
      const double s = p < static_cast<int>(b.signature.size()) ? b.signature[p] : 1.0;
      g(off + 2 * p, off + 2 * p) = s;
      g(off + 2 * p + 1, off + 2 * p + 1) = s;
    }
    off += b.dim;
  }
  return g;
}

Eigen::MatrixXd constant_block_complex_structure(const std::vector<ConstantBlock>& cb) {
  const int n = total_constant_dim(cb);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p + 1 < n; p += 2) {
    J(p + 1, p) = 1.0;
    J(p, p + 1) = -1.0;
  }
  return J;
}

namespace {

struct LiftParts {
  JMat P;      // P_{alpha k} = d mu_alpha / d q_k, alpha = 1..l
  JMat h, L;   // at the working order
  JVec mu;     // mu_0..mu_l at the working order
  std::vector<CJet> ev;
};

LiftParts lift_parts(const QuotientPair& qp, const std::vector<double>& x, int q0, int order) {
  const int N = static_cast<int>(x.size());
  const int l = qp.dim();
  JVec q;
  for (int k = 0; k < l; ++k) q.push_back(Jet::seed(q0 + k, x[q0 + k], N, order + 1));
  const auto e = qp.eval(q);
  LiftParts p;
  p.P = JMat(l, l);
  for (int a = 0; a < l; ++a)
    for (int k = 0; k < l; ++k) p.P(a, k) = e.mu[a + 1].partial(q0 + k);
  p.h = truncated(e.h, order);
  p.L = truncated(e.L, order);
  p.mu = truncated(e.mu, order);
  for (const auto& c : e.ev) p.ev.emplace_back(c.re.truncated(order), c.im.truncated(order));
  return p;
}

// chi_L(c) = sum (-1)^i mu_i c^(l-i)
Jet chi_at(const JVec& mu, double c) {
  const int l = static_cast<int>(mu.size()) - 1;
  Jet s = mu[0] * std::pow(c, l);
  for (int i = 1; i <= l; ++i) s += mu[i] * ((i % 2 ? -1.0 : 1.0) * std::pow(c, l - i));
  return s;
}

struct FrameData {
  JMat G, W, M;  // frame components in the coframe (theta, dq, dy)
};

// theta_i = dt_i + alpha_i with the linear primitive alpha_i on the flat factor;
// returns E (coframe = E dx) and its inverse.
std::pair<JMat, JMat> coframe_change(const std::vector<ConstantBlock>& cb, int l,
                                     const std::vector<double>& x, int order) {
  const int N = static_cast<int>(x.size());
  const Jet zero = Jet::constant(0.0, N, order);
  const int ny = total_constant_dim(cb);
  const int y0 = 2 * l;
  JMat E = jidentity(N, zero);
  JMat Einv = jidentity(N, zero);
  if (ny == 0) return {E, Einv};
  const Eigen::MatrixXd wc =
      constant_block_complex_structure(cb).transpose() * constant_block_metric(cb);
  for (int i = 1; i <= l; ++i) {
    // W_i = omega_c(A_c^(l-i) ., .)
    Eigen::MatrixXd Wi = wc;
    int off = 0;
    for (const auto& b : cb) {
      Wi.block(off, 0, b.dim, ny) *= std::pow(b.c, l - i);
      off += b.dim;
    }
    const double sgn = (i % 2) ? -0.5 : 0.5;
    for (int qq = 0; qq < ny; ++qq) {
      Jet a = zero;
      for (int pp = 0; pp < ny; ++pp)
        if (Wi(pp, qq) != 0.0) a += Jet::seed(y0 + pp, x[y0 + pp], N, order) * (sgn * Wi(pp, qq));
      E(i - 1, y0 + qq) = a;
      Einv(i - 1, y0 + qq) = -a;
    }
  }
  return {E, Einv};
}

Fields from_frame(const FrameData& fr, const std::vector<ConstantBlock>& cb, int l,
                  const std::vector<double>& x, int order) {
  const auto [E, Einv] = coframe_change(cb, l, x, order);
  Fields f;
  const JMat Et = transpose(E);
  f.g = Et * fr.G * E;
  f.omega = Et * fr.W * E;
  f.A = Einv * fr.M * E;
  f.J = inverse(f.g) * transpose(f.omega);
  return f;
}

Chart make_lift_chart(std::shared_ptr<QuotientPair> qp, std::vector<ConstantBlock> cb,
                      double window, const std::string& name) {
  const int l = qp->dim();
  const int ny = total_constant_dim(cb);
  Chart c;
  c.name = name;
  c.kahler = true;
  c.dim = 2 * l + ny;
  c.ell = l;
  for (int i = 1; i <= l; ++i) c.coords.push_back("t" + std::to_string(i));
  for (const auto& s : qp->coord_names()) c.coords.push_back(s);
  for (int i = 0; i < ny; ++i) c.coords.push_back("y" + std::to_string(i));
  c.lo.assign(l, -window);
  c.hi.assign(l, window);
  c.lo.insert(c.lo.end(), qp->spec().lo.begin(), qp->spec().lo.end());
  c.hi.insert(c.hi.end(), qp->spec().hi.begin(), qp->spec().hi.end());
  for (int i = 0; i < ny; ++i) {
    c.lo.push_back(-window);
    c.hi.push_back(window);
  }
  for (const auto& b : cb) c.constants.push_back({b.c, b.dim / 2});
  return c;
}

void check_constant_blocks(const std::vector<ConstantBlock>& cb, bool kahler) {
  for (const auto& b : cb) {
    if (b.dim <= 0) throw std::invalid_argument("constant block dimension must be positive");
    if (kahler && b.dim % 2) throw std::invalid_argument("Kahler constant blocks have even dimension");
    const std::size_t want = kahler ? b.dim / 2 : b.dim;
    if (!b.signature.empty() && b.signature.size() != want)
      throw std::invalid_argument("constant block signature length mismatch");
    for (int s : b.signature)
      if (s != 1 && s != -1) throw std::invalid_argument("signature entries are +1 or -1");
  }
}

std::vector<double> constant_values(const std::vector<ConstantBlock>& cb) {
  std::vector<double> v;
  for (const auto& b : cb) v.push_back(b.c);
  return v;
}

}  // namespace

Chart lift_nonconstant(const PairSpec& spec) { return lift_with_constant_block(spec, {}); }

Chart lift_with_constant_block(const PairSpec& spec, const std::vector<ConstantBlock>& cb,
                               double window) {
  auto qp = std::make_shared<QuotientPair>(spec);
  if (qp->has_jordan()) throw std::invalid_argument("Kahler lifts take real and complex blocks only");
  check_constant_blocks(cb, true);
  qp->validate(constant_values(cb));
  Chart c = make_lift_chart(qp, cb, window, cb.empty() ? "lift" : "lift-with-constant-block");
  const int l = qp->dim();
  c.eval = [qp, cb, l](const std::vector<double>& x, int order) {
    if (order > 2) throw std::invalid_argument("lifted charts support jet order <= 2");
    const int N = static_cast<int>(x.size());
    const Jet zero = Jet::constant(0.0, N, order);
    const LiftParts p = lift_parts(*qp, x, l, order);
    const JMat hinv = inverse(p.h);
    const JMat H = p.P * hinv * transpose(p.P);
    const JMat M = transpose(p.P * p.L * inverse(p.P));
    const Eigen::MatrixXd gc = constant_block_metric(cb);
    const Eigen::MatrixXd wc = constant_block_complex_structure(cb).transpose() * gc;
    FrameData fr{jzero(N, N, zero), jzero(N, N, zero), jzero(N, N, zero)};
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j) {
        fr.G(i, j) = H(i, j);
        fr.G(l + i, l + j) = p.h(i, j);
        fr.W(i, l + j) = -p.P(i, j);
        fr.W(l + j, i) = p.P(i, j);
        fr.M(i, j) = M(i, j);
        fr.M(l + i, l + j) = p.L(i, j);
      }
    int off = 2 * l;
    for (const auto& b : cb) {
      const Jet chi = chi_at(p.mu, b.c);
      for (int i = 0; i < b.dim; ++i) {
        for (int j = 0; j < b.dim; ++j) {
          const int yi = off + i - 2 * l, yj = off + j - 2 * l;
          if (gc(yi, yj) != 0.0) fr.G(off + i, off + j) = chi * gc(yi, yj);
          if (wc(yi, yj) != 0.0) fr.W(off + i, off + j) = chi * wc(yi, yj);
        }
        fr.M(off + i, off + i) += b.c;
      }
      off += b.dim;
    }
    return from_frame(fr, cb, l, x, order);
  };
  return c;
}

Chart build_main_example(const PairSpec& spec, const std::vector<ConstantBlock>& cb,
                         double window) {
  for (const auto& b : spec.blocks)
    if (!std::holds_alternative<RealBlock>(b) && !std::holds_alternative<ComplexBlock>(b))
      throw std::invalid_argument("the explicit example takes real and complex blocks only");
  auto qp = std::make_shared<QuotientPair>(spec);
  check_constant_blocks(cb, true);
  qp->validate(constant_values(cb));
  Chart c = make_lift_chart(qp, cb, window, "main-example");
  const int l = qp->dim();
  c.eval = [qp, cb, l](const std::vector<double>& x, int order) {
    if (order > 2) throw std::invalid_argument("explicit example supports jet order <= 2");
    const int N = static_cast<int>(x.size());
    const Jet zero = Jet::constant(0.0, N, order);
    const LiftParts p = lift_parts(*qp, x, l, order);
    // per-block eigenvalue data
    struct B {
      bool complex;
      int eps;
      int q;  // first quotient coordinate
      int k;  // index into the eigenvalue list
      CJet rho, drho;
      std::vector<CJet> mu_hat;  // elementary symmetric of the other eigenvalues
    };
    std::vector<B> blocks;
    int q = 0, k = 0;
    for (const auto& blk : qp->spec().blocks) {
      B b;
      b.q = q;
      b.k = k;
      const CJet cz = CJet(Jet::seed(l + q, x[l + q], N, order),
                           std::holds_alternative<ComplexBlock>(blk)
                               ? Jet::seed(l + q + 1, x[l + q + 1], N, order)
                               : zero);
      if (const auto* r = std::get_if<RealBlock>(&blk)) {
        b.complex = false;
        b.eps = r->eps;
        b.drho = CJet(poly_eval(poly_derivative(r->rho), cz.re), zero);
      } else {
        const auto& cbk = std::get<ComplexBlock>(blk);
        b.complex = true;
        b.eps = 1;
        b.drho = poly_eval(poly_derivative(cbk.rho), cz);
      }
      b.rho = p.ev[k];
      std::vector<CJet> others;
      for (int j = 0; j < static_cast<int>(p.ev.size()); ++j)
        if (j != k) others.push_back(p.ev[j]);
      b.mu_hat = elementary(others, zero);
      blocks.push_back(b);
      q += b.complex ? 2 : 1;
      k += b.complex ? 2 : 1;
    }
    auto delta = [&](const B& b) {
      CJet d(zero + 1.0, zero);
      for (int j = 0; j < static_cast<int>(p.ev.size()); ++j)
        if (j != b.k) d = d * (b.rho - p.ev[j]);
      return d;
    };
    FrameData fr{jzero(N, N, zero), jzero(N, N, zero), jzero(N, N, zero)};
    // theta-theta block
    for (int i = 1; i <= l; ++i)
      for (int j = 1; j <= l; ++j) {
        Jet s = zero;
        for (const auto& b : blocks) {
          const CJet term = b.mu_hat[i - 1] * b.mu_hat[j - 1] / delta(b) * b.drho * b.drho;
          if (b.complex)
            s += term.re * -8.0;
          else
            s += term.re * static_cast<double>(b.eps);
        }
        fr.G(i - 1, j - 1) = s;
      }
    // quotient block, omega, A
    for (int a = 0; a < l; ++a)
      for (int b = 0; b < l; ++b) {
        fr.G(l + a, l + b) = p.h(a, b);
        fr.W(a, l + b) = -p.P(a, b);
        fr.W(l + b, a) = p.P(a, b);
        fr.M(l + a, l + b) = p.L(a, b);
      }
    // companion block: A e_{t_i} = mu_i e_{t_1} - e_{t_{i+1}}
    for (int i = 1; i <= l; ++i) {
      fr.M(0, i - 1) += p.mu[i];
      if (i < l) fr.M(i, i - 1) -= 1.0;
    }
    const Eigen::MatrixXd gc = constant_block_metric(cb);
    const Eigen::MatrixXd Jc = constant_block_complex_structure(cb);
    const Eigen::MatrixXd wc = Jc.transpose() * gc;
    int off = 2 * l;
    for (const auto& b : cb) {
      const Jet chi = chi_at(p.mu, b.c);
      for (int i = 0; i < b.dim; ++i) {
        for (int j = 0; j < b.dim; ++j) {
          const int yi = off + i - 2 * l, yj = off + j - 2 * l;
          if (gc(yi, yj) != 0.0) fr.G(off + i, off + j) = chi * gc(yi, yj);
          if (wc(yi, yj) != 0.0) fr.W(off + i, off + j) = chi * wc(yi, yj);
        }
        fr.M(off + i, off + i) += b.c;
      }
      off += b.dim;
    }
    Fields f = from_frame(fr, cb, l, x, order);
    // J from its explicit coframe action; frame matrix Jf, then J = E^-1 Jf E
    JMat Jf = jzero(N, N, zero);
    for (const auto& b : blocks) {
      const CJet d = delta(b);
      for (int j = 1; j <= l; ++j) {
        if (b.complex) {
          const CJet kap = b.drho * b.mu_hat[j - 1] / d * 4.0;
          Jf(l + b.q, j - 1) = kap.re;
          Jf(l + b.q + 1, j - 1) = kap.im;
        } else {
          const CJet kap = b.drho * b.mu_hat[j - 1] / d;
          Jf(l + b.q, j - 1) = kap.re * -static_cast<double>(b.eps);
        }
      }
      for (int i = 1; i <= l; ++i) {
        CJet rp(zero + 1.0, zero);
        for (int e = 0; e < l - i; ++e) rp = rp * b.rho;
        const CJet cc = rp / b.drho;
        const double sg = (i % 2) ? -1.0 : 1.0;  // (-1)^i
        if (b.complex) {
          Jf(i - 1, l + b.q) = cc.re * (0.5 * sg);
          Jf(i - 1, l + b.q + 1) = cc.im * (-0.5 * sg);
        } else {
          Jf(i - 1, l + b.q) = cc.re * (-sg * b.eps);
        }
      }
    }
    for (int i = 0; i < Jc.rows(); ++i)
      for (int j = 0; j < Jc.cols(); ++j)
        if (Jc(i, j) != 0.0) Jf(2 * l + i, 2 * l + j) = zero + Jc(i, j);
    const auto [E, Einv] = coframe_change(cb, l, x, order);
    f.J = Einv * Jf * E;
    return f;
  };
  return c;
}

}  // namespace cpg
