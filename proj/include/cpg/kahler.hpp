#pragma once

#include <complex>
#include <vector>

#include "cpg/geometry.hpp"
#include "cpg/report.hpp"

namespace cpg {

// Lambda = 1/4 grad tr A on Kahler charts, 1/2 grad tr A on projective ones.
const JVec& lambda_of(Point& p);

// Pointwise residuals (relative, see rel()).
struct KahlerResiduals {
  double J2 = 0, hermitian = 0, omega = 0, d_omega = 0, nabla_J = 0;
};
KahlerResiduals kahler_residuals(Point& p);
double cproj_residual_at(Point& p);
double proj_residual_at(Point& p);
double selfadjoint_residual_at(Point& p);
double commutator_AJ_at(Point& p);

ResidualReport check_kahler(SampleBatch& batch, double tol);
ResidualReport cproj_residual(SampleBatch& batch, double tol);
// Throws std::invalid_argument naming the worst sample when L is not h-selfadjoint.
ResidualReport proj_residual(SampleBatch& batch, double tol);

// g((det A)^(-1/2) A^-1 ., .) on a Kahler chart of real dimension 2n.
JMat partner_metric(const JMat& g, const JMat& A);
// (det ghat / det g)^(1/(2(n+1))) ghat^-1 g.
JMat recover_A(const JMat& g, const JMat& ghat);

// Monic square root of the real characteristic polynomial of a J-commuting A:
// coefficients of det_C(t - A), lowest degree first.
JVec complex_charpoly(const JMat& A);
Jet det_complex(const JMat& A);

// Characteristic polynomial with the declared constant eigenvalues divided out:
// prod over non-constant eigenvalues (t - rho_i), lowest degree first.
const JVec& nonconstant_charpoly(Point& p);
// mu_0 = 1, ..., mu_ell from the non-constant characteristic polynomial.
const JVec& mu_of(Point& p);

struct EigenData {
  std::vector<std::complex<double>> values;  // non-constant eigenvalues
  bool regular = true;
  double min_gap = 0.0;
};
const EigenData& eigen_of(Point& p, double gap = 1e-6);
// Jets of the non-constant eigenvalues (Newton iteration on the characteristic polynomial).
const std::vector<CJet>& eigen_jets(Point& p);

ResidualReport hamiltonian_killing_check(SampleBatch& batch, double tol);
// Residual of hat Gamma - Gamma against the c-projective change of connection.
double connection_difference_at(Point& p, const JMat& ghat);
ResidualReport connection_difference_check(SampleBatch& batch, double tol);

}  // namespace cpg
