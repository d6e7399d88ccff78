#include "dcfeas/esqm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "dcfeas/errors.hpp"

namespace dcfeas {

namespace {

double penalty_with(const ProblemInstance& inst, double beta_inv, std::span<const double> x,
                    double g_hat) {
  return inst.objective.eval(x) + beta_inv * std::max(g_hat, 0.0);
}

}  // namespace

double exact_penalty_value(const ProblemInstance& inst, double beta, std::span<const double> x) {
  if (!(beta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "exact_penalty_value: beta <= 0");
  return penalty_with(inst, 1.0 / beta, x, inst.max_constraint(x));
}

RunReport esqm_solve(const ProblemInstance& inst, std::span<const double> x0,
                     const ESQMConfig& cfg) {
  if (inst.constraints.size() != 1) {
    throw Error(ErrorCode::kUnsupported, "esqm: exactly one smooth constraint is supported");
  }
  if (x0.size() != inst.dimension()) {
    throw Error(ErrorCode::kInvalidArgument, "esqm: x0 has the wrong dimension");
  }
  if (!inst.set.contains(x0)) throw Error(ErrorCode::kInfeasibleStart, "esqm: x0 is outside C");
  if (!(cfg.beta0 > 0.0 && cfg.delta > 0.0 && cfg.t > 0.0 && cfg.t < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "esqm: invalid configuration");
  }
  const auto start = std::chrono::steady_clock::now();
  const SmoothConstraint& g = inst.constraints.front();

  RunReport report;
  Vector x(x0.begin(), x0.end());
  double beta_inv = 1.0 / cfg.beta0;
  std::optional<double> warm;
  IterateState state;

  for (int k = 0; k < cfg.max_iter; ++k) {
    const double beta = 1.0 / beta_inv;
    const Vector xi = inst.objective.p2_subgrad(x);
    const double gx = g.eval(x);
    const Vector a = g.grad(x);
    const double r = dot(a, x) - gx;
    Vector y = x;
    axpy(beta, xi, y);
    const SubproblemSpec spec{y, beta, a, r, &inst.set};
    const EsqmSubproblemSolution esol = solve_esqm_subproblem(spec, warm, cfg.root);
    const Vector& u = esol.solution.x_star;
    const Vector d = subtract(u, x);
    const double dn2 = dot(d, d);

    const double f_x = penalty_with(inst, beta_inv, x, gx);
    double t = 1.0;
    bool accepted = false;
    Vector xt;
    double f_xt = 0.0;
    for (int h = 0; h <= cfg.max_halvings; ++h) {
      xt = x;
      axpy(t, d, xt);
      f_xt = penalty_with(inst, beta_inv, xt, g.eval(xt));
      if (f_xt <= f_x - cfg.c * t * beta_inv * dn2) {
        accepted = true;
        break;
      }
      t *= cfg.t;
      if (t <= cfg.min_step) break;
    }
    report.iterations = static_cast<std::size_t>(k) + 1;
    if (!accepted) {
      report.termination = Termination::kSmallStepsize;
      break;
    }

    state.x = x;
    state.u = u;
    state.xi = xi;
    state.beta = beta;
    state.beta0 = beta;
    state.lambda = esol.solution.lambda_star;
    state.k = static_cast<std::size_t>(k);
    const bool critical = check_termination(state, inst, cfg.tol, g.eval(u));
    const bool violated = esol.slack > 0.0;

    if (cfg.log_history) {
      IterationRecord rec;
      rec.k = state.k;
      rec.obj = inst.objective.eval(x);
      rec.obj_next = inst.objective.eval(xt);
      rec.step_norm = std::sqrt(dn2);
      rec.beta = beta;
      rec.beta0 = beta;
      rec.lambda = state.lambda;
      rec.slack_next = relative_constraint_slack(inst, xt);
      rec.in_box_next = inst.set.contains(xt);
      rec.newton_iters = esol.solution.newton_iters;
      rec.penalty = f_x;
      rec.penalty_next = f_xt;
      rec.beta_inv = beta_inv;
      rec.t_step = t;
      rec.violated = violated;
      report.history.push_back(rec);
    }

    x = std::move(xt);
    warm = state.lambda;
    report.final_lambda = state.lambda;
    report.final_beta = beta;
    if (violated) beta_inv += cfg.delta;
    if (critical) {
      report.termination = Termination::kCriticality;
      break;
    }
    if (t <= cfg.min_step) {
      report.termination = Termination::kSmallStepsize;
      break;
    }
  }
  report.final_x = std::move(x);
  report.cpu_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace dcfeas
