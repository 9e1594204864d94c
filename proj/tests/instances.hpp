#pragma once

// Builder instances shared by the unit tests and the acceptance runner.

#include "cpg/builders.hpp"
#include "cpg/report.hpp"

namespace inst {

using namespace cpg;

// rho_1 = x_1, rho_2 = 2 + x_2 (eps_2 = -1 gives an indefinite pair).
inline PairSpec two_real(int eps2 = 1) {
  PairSpec s;
  s.blocks = {RealBlock{1, {0.0, 1.0}}, RealBlock{eps2, {2.0, 1.0}}};
  s.lo = {0.2, -0.3};
  s.hi = {0.8, 0.3};
  return s;
}

inline PairSpec one_real() {
  PairSpec s;
  s.blocks = {RealBlock{1, {0.0, 1.0}}};
  s.lo = {0.2};
  s.hi = {0.8};
  return s;
}

// rho_1 = x, rho_2 = 3 + z with z = x_2 + i y_2.
inline PairSpec real_complex() {
  PairSpec s;
  s.blocks = {RealBlock{1, {0.0, 1.0}}, ComplexBlock{{{3.0, 0.0}, {1.0, 0.0}}}};
  s.lo = {0.2, -0.3, 0.2};
  s.hi = {0.8, 0.3, 0.6};
  return s;
}

inline std::vector<ConstantBlock> zero_one_blocks(int dim = 2) {
  return {ConstantBlock{0.0, dim, {}}, ConstantBlock{1.0, dim, {}}};
}

inline Mobility2Spec mobility(double C, bool kahler = true) {
  Mobility2Spec s;
  s.ell = 1;
  s.a = {1.0};
  s.C = C;
  s.cb = zero_one_blocks(kahler ? 2 : 1);
  s.kahler = kahler;
  s.rho_lo = {0.2};
  s.rho_hi = {0.8};
  return s;
}

inline JordanOdeSpec jordan_ode(int size) {
  JordanOdeSpec s;
  s.size = size;
  s.n2 = 1;
  s.C = -0.5;
  s.rho0 = 0.5;
  s.rho_lo = 0.15;
  s.rho_hi = 0.85;
  s.init = size == 2 ? std::vector<double>{1.0, 0.3} : std::vector<double>{1.0, 0.3, 0.2};
  return s;
}

inline JordanChartSpec jordan_pair(const JordanOdeSolution& ode) {
  JordanChartSpec s;
  s.ode = ode;
  s.a = {1.0};
  if (ode.spec.size == 2) {
    s.lo = {0.0, 0.2, 0.5};
    s.hi = {0.1, 0.35, 0.7};
  } else {
    s.lo = {0.0, 0.0, 0.2, 0.5};
    s.hi = {0.1, 0.1, 0.35, 0.7};
  }
  return s;
}

inline ResidualReport run(const Chart& c, const GridSpec& g, int order,
                          const std::function<ResidualReport(SampleBatch&)>& suites) {
  return run_chunked(c, sample_points(c, g), order, suites);
}

}  // namespace inst
