#pragma once

// Feasible proximal algorithm with retraction for convex smooth constraints,
// plus the run-report types shared by all drivers.

#include <cstddef>
#include <string>
#include <vector>

#include "dcfeas/linalg.hpp"
#include "dcfeas/problem.hpp"
#include "dcfeas/subproblem.hpp"

namespace dcfeas {

struct FPAConfig {
  double c = 1e-4;         // sufficient-descent constant
  double eta = 0.5;        // backtracking ratio
  double beta_lo = 1e-8;
  double beta_hi = 1e8;
  double beta_init = 1.0;  // beta_0^0
  double beta_growth = 2.0;
  double tol = 1e-4;
  int max_iter = 10000;
  double small_beta = 1e-10;   // beta_k at or below this stops the run
  double beta_floor = 1e-30;   // line search below this is an error
  bool log_history = false;
  DualRootOptions root;
};

/// Snapshot of one outer iteration, as consumed by beta0_update and
/// check_termination.
struct IterateState {
  Vector x;       // x^k
  Vector u;       // u^k
  Vector xi;      // xi^k in dP2(x^k)
  double beta = 1.0;   // accepted beta_k
  double beta0 = 1.0;  // trial beta_k^0
  double tau = 0.0;
  double lambda = 0.0;
  double obj = 0.0;
  std::size_t k = 0;
};

struct IterationRecord {
  std::size_t k = 0;
  double obj = 0.0;        // P(x^k)
  double obj_next = 0.0;   // P(x^{k+1})
  double step_norm = 0.0;  // ||u^k - x^k||
  double beta = 0.0;
  double beta0 = 0.0;
  double tau = 0.0;
  double tau_bound = 0.0;  // a-priori bound on tau (0 when not applicable)
  double lambda = 0.0;
  double slack_next = 0.0;  // relative constraint slack at x^{k+1}
  bool in_box_next = true;
  int backtracks = 0;
  int newton_iters = 0;
  // Penalty-method fields.
  double penalty = 0.0;       // F_k(x^k)
  double penalty_next = 0.0;  // F_k(x^{k+1})
  double beta_inv = 0.0;      // beta_k^{-1}
  double t_step = 0.0;
  bool violated = false;      // linearized constraint violated at u^k
};

enum class Termination { kCriticality, kSmallStepsize, kMaxIter };

const char* to_string(Termination t);

struct RunReport {
  std::size_t iterations = 0;
  double cpu_seconds = 0.0;
  Vector final_x;
  Termination termination = Termination::kMaxIter;
  double final_lambda = 0.0;
  double final_beta = 0.0;
  std::string initializer;  // label of the routine that produced x0
  std::size_t total_backtracks = 0;
  // Every retraction trial is checked against its a-priori tau bound.
  std::size_t tau_bound_checks = 0;
  std::size_t tau_bound_violations = 0;
  std::vector<IterationRecord> history;
};

struct RetractionResult {
  Vector x_tilde;
  double tau = 0.0;
  double g_u = 0.0;  // first constraint at the trial point u
};

/// Moves u toward the Slater point until every g_i is nonpositive. Returns
/// tau = 0 when u is already feasible; otherwise tau = max_i tau_i with
/// g_i((1 - tau_i) u + tau_i slater) = 0, nudged up so that the returned
/// point satisfies g_i <= 0 in floating point.
RetractionResult retract_convex(std::span<const double> u_tilde, std::span<const double> slater,
                                const std::vector<SmoothConstraint>& g);

/// beta_k^0 = clamp(growth * beta_{k-1}^0) if beta_{k-1} = beta_{k-1}^0,
/// else clamp(beta_{k-1}), clamped to [beta_lo, beta_hi].
double beta0_update(const IterateState& prev, const FPAConfig& cfg);

/// max{||xi_u - xi|| + Lk ||u - x||, 100 max{|lambda g1(u)|, g1(u)}} <= tol max{||u||, 1}
/// with Lk = lambda L_g + 1/beta.
bool check_termination(const IterateState& state, const ProblemInstance& inst, double tol);
bool check_termination(const IterateState& state, const ProblemInstance& inst, double tol,
                       double g1_at_u);

/// Left-hand side of the termination test (for diagnostics).
double termination_measure(const IterateState& state, const ProblemInstance& inst,
                           double g1_at_u);

/// Runs the method from a feasible x0 on a convex-constraint instance and
/// returns x^{k+1} of the last iteration.
RunReport fpa_solve(const ProblemInstance& inst, std::span<const double> x0,
                    const FPAConfig& cfg = {});

/// Copy of `inst` whose objective uses the given mu.
ProblemInstance with_mu(const ProblemInstance& inst, double mu);

}  // namespace dcfeas
