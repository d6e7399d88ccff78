#pragma once

// Outer loop shared by the convex and the structured-nonconvex drivers. The
// two differ only in how a trial point is pulled back into the feasible set.

#include <functional>
#include <string>

#include "dcfeas/fpa_convex.hpp"

namespace dcfeas::detail {

struct TrialRetraction {
  RetractionResult result;
  double tau_bound = 0.0;  // <= 0 disables the check
};

/// Retraction of a trial point u given the current iterate x^k.
using RetractFn = std::function<TrialRetraction(const Vector& u)>;
/// Called once per outer iteration at x^k.
using RetractorFactory = std::function<RetractFn(const Vector& x)>;

RunReport run_fpa(const ProblemInstance& inst, std::span<const double> x0, const FPAConfig& cfg,
                  const RetractorFactory& make_retractor);

/// Relative slack <= 1e-10 and x in C.
bool is_feasible_start(const ProblemInstance& inst, std::span<const double> x);

}  // namespace dcfeas::detail
