#pragma once

// Exact solvers for the per-iteration convex subproblems
//
//   min_x  sum_J ||x_J|| + (2 beta)^{-1} ||x - y||^2   s.t.  <a, x> <= r,  x in C
//
// (and its slack-augmented variant) through the scalar dual function T.

#include <optional>
#include <span>

#include "dcfeas/linalg.hpp"
#include "dcfeas/problem.hpp"

namespace dcfeas {

struct SubproblemSpec {
  std::span<const double> y;      // prox center
  double beta = 1.0;              // > 0
  std::span<const double> a_lin;  // normal of the linearized constraint
  double r_lin = 0.0;             // right-hand side
  const GroupBoxSet* set = nullptr;
};

struct SubproblemSolution {
  Vector x_star;
  double lambda_star = 0.0;
  double kkt_residual = 0.0;
  int newton_iters = 0;
  int bisection_iters = 0;
};

struct EsqmSubproblemSolution {
  SubproblemSolution solution;
  double slack = 0.0;
};

/// Root-finding controls. Defaults are the ones used by the experiments.
struct DualRootOptions {
  double t_tol = 1e-10;        // |T(lambda)| target
  double armijo_factor = 0.5;  // backtracking ratio of the Newton line search
  double slope = 1e-4;         // sufficient-decrease constant
  double mu_scale = 1e-4;      // regularization mu_k = mu_scale |T|^{1/2}
  double min_step = 1e-10;     // Newton step below this switches to bisection
  int max_newton = 200;
  int max_bisection = 200;
};

/// Per block, with w_J = y_J - lambda beta a_J:
///   x_J = min{max{1 - beta/||w_J||, 0}, M/||w_J||} w_J   (x_J = 0 if w_J = 0).
Vector group_shrink_clip(const SubproblemSpec& spec, double lambda);

/// T(lambda) = r - <a, group_shrink_clip(spec, lambda)>; nondecreasing in lambda.
double dual_function(const SubproblemSpec& spec, double lambda);

/// T and an element of its generalized derivative (right branch at kinks).
double dual_function(const SubproblemSpec& spec, double lambda, double* derivative);

/// Solves the subproblem exactly: lambda* = 0 when x(0) satisfies the linear
/// constraint, else a root of T found by a safeguarded semismooth Newton
/// method (bisection fallback). `warm_lambda` seeds the Newton iteration.
SubproblemSolution solve_linearized_prox(const SubproblemSpec& spec,
                                         std::optional<double> warm_lambda = std::nullopt,
                                         const DualRootOptions& opts = {});

/// Slack-augmented variant  min ... + s/beta  s.t. <a,x> - r <= s, s >= 0.
/// The multiplier lives in [0, 1/beta]; s > 0 only when lambda* = 1/beta.
EsqmSubproblemSolution solve_esqm_subproblem(const SubproblemSpec& spec,
                                             std::optional<double> warm_lambda = std::nullopt,
                                             const DualRootOptions& opts = {});

/// sum_J ||x_J|| + (2 beta)^{-1} ||x - y||^2
double subproblem_objective(const SubproblemSpec& spec, std::span<const double> x);

}  // namespace dcfeas
