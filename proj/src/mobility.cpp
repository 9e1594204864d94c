#include <Eigen/QR>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "cpg/builders.hpp"
#include "cpg/flows.hpp"

namespace cpg {
namespace {

// Coordinate layout of a mobility-2 chart.
struct Layout {
  int l = 0;        // eigenvalue count
  int t0 = 0;       // first t coordinate (Kahler only)
  int r0 = 0;       // first rho coordinate
  int y0 = 0;       // first flat coordinate
  int T_count = 0;  // entries of the t-matrix
  std::vector<int> block_of_y;
};

Layout layout_of(int l, const std::vector<ConstantBlock>& cb, bool kahler) {
  Layout L;
  L.l = l;
  L.r0 = kahler ? l : 0;
  L.y0 = kahler ? 2 * l : l;
  L.T_count = kahler ? l * l : 0;
  for (std::size_t b = 0; b < cb.size(); ++b)
    for (int i = 0; i < cb[b].dim; ++i) L.block_of_y.push_back(static_cast<int>(b));
  return L;
}

// v = T t d_t + sum rho_i (1 - rho_i) d_rho_i + s_b y d_y; params = (T row-major, s).
JVec field_of(const Layout& L, const std::vector<double>& params, const std::vector<double>& x,
              int order) {
  const JVec q = seeds(x, order);
  JVec v(x.size(), q[0] * 0.0);
  for (int i = 0; i < L.T_count / std::max(L.l, 1); ++i)
    for (int j = 0; j < L.l; ++j) v[L.t0 + i] += q[L.t0 + j] * params[i * L.l + j];
  for (int i = 0; i < L.l; ++i) v[L.r0 + i] = q[L.r0 + i] * (1.0 - q[L.r0 + i]);
  for (std::size_t k = 0; k < L.block_of_y.size(); ++k)
    v[L.y0 + k] = q[L.y0 + k] * params[L.T_count + L.block_of_y[k]];
  return v;
}

Eigen::VectorXd stacked(const LieDefects& d) {
  Eigen::VectorXd out(d.A.size() + d.g.size());
  out << Eigen::Map<const Eigen::VectorXd>(d.A.data(), d.A.size()) / (1.0 + d.scale_A),
      Eigen::Map<const Eigen::VectorXd>(d.g.data(), d.g.size()) / (1.0 + d.scale_g);
  return out;
}

void check_window(const Mobility2Spec& s) {
  if (s.ell < 1) throw std::invalid_argument("mobility-2 instances need ell >= 1");
  if (static_cast<int>(s.a.size()) != s.ell) throw std::invalid_argument("need one a_i per eigenvalue");
  if (static_cast<int>(s.rho_lo.size()) != s.ell || static_cast<int>(s.rho_hi.size()) != s.ell)
    throw std::invalid_argument("need one rho interval per eigenvalue");
  for (int i = 0; i < s.ell; ++i) {
    if (s.a[i] == 0.0) throw std::invalid_argument("a_i must be nonzero");
    if (!(0.0 < s.rho_lo[i] && s.rho_lo[i] < s.rho_hi[i] && s.rho_hi[i] < 1.0))
      throw std::invalid_argument("rho window must lie inside (0, 1)");
    if (i > 0 && !(s.rho_hi[i - 1] < s.rho_lo[i]))
      throw std::invalid_argument("rho windows must be ordered 0 < rho_1 < ... < rho_l < 1");
  }
}

// chi_L(c) = prod (c - rho_i)
Jet chi_at(const JVec& mu, double c) {
  const int l = static_cast<int>(mu.size()) - 1;
  Jet s = mu[0] * std::pow(c, l);
  for (int i = 1; i <= l; ++i) s += mu[i] * ((i % 2 ? -1.0 : 1.0) * std::pow(c, l - i));
  return s;
}

Chart projective_chart(const PairSpec& pair, const std::vector<ConstantBlock>& cb, double window) {
  auto qp = std::make_shared<QuotientPair>(pair);
  std::vector<double> cs;
  for (const auto& b : cb) {
    if (b.dim <= 0) throw std::invalid_argument("constant block dimension must be positive");
    if (!b.signature.empty() && static_cast<int>(b.signature.size()) != b.dim)
      throw std::invalid_argument("constant block signature length mismatch");
    cs.push_back(b.c);
  }
  qp->validate(cs);
  Chart c;
  c.name = "mobility2-projective";
  c.kahler = false;
  const int l = qp->dim();
  int ny = 0;
  for (const auto& b : cb) ny += b.dim;
  c.dim = l + ny;
  c.ell = l;
  c.coords = qp->coord_names();
  c.lo = pair.lo;
  c.hi = pair.hi;
  for (int i = 0; i < ny; ++i) {
    c.coords.push_back("y" + std::to_string(i));
    c.lo.push_back(-window);
    c.hi.push_back(window);
  }
  for (const auto& b : cb) c.constants.push_back({b.c, b.dim});
  c.eval = [qp, cb, l, ny](const std::vector<double>& x, int order) {
    const JVec q = seeds(x, order);
    const auto e = qp->eval(JVec(q.begin(), q.begin() + l));
    const int N = l + ny;
    Fields f;
    f.g = jzero(N, N, q[0]);
    f.A = jzero(N, N, q[0]);
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j) {
        f.g(i, j) = e.h(i, j);
        f.A(i, j) = e.L(i, j);
      }
    int off = l;
    for (const auto& b : cb) {
      const Jet chi = chi_at(e.mu, b.c);
      for (int i = 0; i < b.dim; ++i) {
        const double s = b.signature.empty() ? 1.0 : b.signature[i];
        f.g(off + i, off + i) = chi * s;
        f.A(off + i, off + i) += b.c;
      }
      off += b.dim;
    }
    return f;
  };
  return c;
}

}  // namespace

Mobility2 build_mobility2(const Mobility2Spec& spec) {
  check_window(spec);
  PairSpec pair;
  for (int i = 0; i < spec.ell; ++i)
    pair.blocks.push_back(RhoBlock{ScalarFn::power_law(spec.a[i], spec.C, 1.0 + spec.ell + spec.C)});
  pair.lo = spec.rho_lo;
  pair.hi = spec.rho_hi;
  Chart base = spec.kahler ? lift_with_constant_block(pair, spec.cb, spec.window)
                           : projective_chart(pair, spec.cb, spec.window);
  const Layout L = layout_of(spec.ell, spec.cb, spec.kahler);
  const int np = L.T_count + static_cast<int>(spec.cb.size());
  const LieCoefficients coef = canonical_coefficients(base, spec.C);

  // The defects are affine in the parameters: collect them at unit parameter vectors.
  const auto xs = sample_points(base, GridSpec{2, 8, 7});
  std::vector<Fields> fs;
  for (const auto& x : xs) fs.push_back(base.eval(x, 1));
  auto defect = [&](std::size_t k, const std::vector<double>& p) {
    return stacked(lie_defects(fs[k], field_of(L, p, xs[k], 1), coef, spec.kahler));
  };
  std::vector<double> p0(np, 0.0);
  std::vector<Eigen::VectorXd> d0;
  int rows = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    d0.push_back(defect(k, p0));
    rows += static_cast<int>(d0.back().size());
  }
  Eigen::VectorXd sol = Eigen::VectorXd::Zero(np);
  if (np > 0) {
    Eigen::MatrixXd M(rows, np);
    Eigen::VectorXd rhs(rows);
    int r = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const int m = static_cast<int>(d0[k].size());
      rhs.segment(r, m) = -d0[k];
      for (int j = 0; j < np; ++j) {
        std::vector<double> e(np, 0.0);
        e[j] = 1.0;
        M.block(r, j, m, 1) = defect(k, e) - d0[k];
      }
      r += m;
    }
    sol = M.colPivHouseholderQr().solve(rhs);
  }
  std::vector<double> params(sol.data(), sol.data() + np);
  double fit = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k)
    fit = std::max(fit, defect(k, params).cwiseAbs().maxCoeff());

  Mobility2 out;
  out.C = spec.C;
  out.fit_residual = fit;
  out.T.assign(params.begin(), params.begin() + L.T_count);
  out.s.assign(params.begin() + L.T_count, params.end());
  out.chart = base;
  out.chart.name = spec.kahler ? "mobility2" : "mobility2-projective";
  std::ostringstream note;
  note << "off-leaf components of v reconstructed, residual-certified (fit residual " << fit << ")";
  out.chart.notes.push_back(note.str());
  auto base_eval = base.eval;
  out.chart.eval = [base_eval, L, params](const std::vector<double>& x, int order) {
    Fields f = base_eval(x, order);
    f.v = field_of(L, params, x, order);
    return f;
  };
  return out;
}

Chart build_final_metric(double B, const std::vector<ConstantBlock>& cb, bool kahler, double rho_lo,
                         double rho_hi, double window) {
  if (B == 0.0) throw std::invalid_argument("B must be nonzero");
  Mobility2Spec s;
  s.ell = 1;
  s.a = {-4.0 * B};
  s.C = -1.0;
  s.cb = cb;
  s.kahler = kahler;
  s.rho_lo = {rho_lo};
  s.rho_hi = {rho_hi};
  s.window = window;
  Chart c = build_mobility2(s).chart;
  c.name = kahler ? "final-metric" : "final-metric-projective";
  return c;
}

}  // namespace cpg
