#pragma once

// Feasible proximal algorithm for a single constraint ell(a x - b) <= sigma
// with ell a concave-composite loss. Trial points are retracted onto the
// level set of the convex quadratic majorant built at the current iterate.

#include <span>

#include "dcfeas/fpa_convex.hpp"
#include "dcfeas/lorentzian.hpp"

namespace dcfeas {

/// With d = a u - b and an anchor satisfying a slater = b, the segment
/// residual is (1 - t) d, so ell^y((1 - t) d) = (1 - t)^2 ell^y(d) and
/// tau = 1 - sqrt(sigma_tilde / ell^y(d)). Returns tau = 0 when u already
/// lies in the majorant level set. g_u holds ell^y(d) - sigma_tilde.
RetractionResult retract_quadratic(std::span<const double> u_tilde,
                                   std::span<const double> slater, const MajorizationData& m,
                                   const DenseMatrix& a_mat, std::span<const double> b);

RunReport fpa_nonconvex_solve(const ProblemInstance& inst, std::span<const double> x0,
                              const FPAConfig& cfg = {});

}  // namespace dcfeas
