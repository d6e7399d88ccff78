#pragma once

// Penalty-based sequential method used as a baseline: slack-augmented
// subproblem, Armijo search on the exact penalty and an additive update of
// the inverse penalty parameter. Iterates stay in C but may violate g.

#include <span>

#include "dcfeas/fpa_convex.hpp"

namespace dcfeas {

struct ESQMConfig {
  double c = 1e-4;
  double beta0 = 1.0;
  double t = 0.5;       // Armijo ratio
  double delta = 0.5;   // increment of 1/beta on violating iterations
  double tol = 1e-4;
  int max_iter = 20000;
  int max_halvings = 60;
  double min_step = 1e-10;
  bool log_history = false;
  DualRootOptions root;
};

/// F(x) = P(x) + beta^{-1} max{max_i g_i(x), 0}
double exact_penalty_value(const ProblemInstance& inst, double beta, std::span<const double> x);

RunReport esqm_solve(const ProblemInstance& inst, std::span<const double> x0,
                     const ESQMConfig& cfg = {});

}  // namespace dcfeas
