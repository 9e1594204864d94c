#pragma once

#include <functional>

#include "cpg/kahler.hpp"

namespace cpg {

struct CanonicalKilling {
  int ell = 0;
  std::vector<JVec> grad;  // grad mu_i, i = 1..ell
  std::vector<JVec> K;     // K_i = J grad mu_i (empty on projective charts)
};
const CanonicalKilling& killing_of(Point& p);

// All eight statements about canonical Killing fields in their locally
// checkable form, plus the hamiltonian and Poisson-commutation properties.
ResidualReport killing_field_suite(SampleBatch& batch, double tol);
// A K_i = mu_i K_1 - K_(i+1), K_(ell+1) = 0.
ResidualReport a_on_k_recurrence(SampleBatch& batch, double tol);

using SpanFn = std::function<std::vector<JVec>(Point&)>;
// Component of nabla_u v orthogonal to the span, over all pairs of spanning fields.
ResidualReport totally_geodesic_residual(SampleBatch& batch, const SpanFn& span, double tol,
                                         const std::string& name = "geodesic.totally_geodesic");
SpanFn gradient_span();

// Projective pairs: [grad mu_i, grad mu_j] = 0 and
// (dmu_i o L^-1) / det L = -d hat mu_(ell+1-i).
ResidualReport duality_identities(SampleBatch& batch, double tol);

}  // namespace cpg
