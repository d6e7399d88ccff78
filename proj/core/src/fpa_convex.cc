#include "dcfeas/fpa_convex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include "dcfeas/errors.hpp"
#include "fpa_driver.hpp"

namespace dcfeas {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kCriticality: return "criticality";
    case Termination::kSmallStepsize: return "small_stepsize";
    case Termination::kMaxIter: return "max_iter";
  }
  return "unknown";
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Root in (0, 1] of h(t) = g((1 - t) u + t s), where h(0) > 0 > h(1) and h is
// convex along the segment.
double segment_root(const SmoothConstraint& g, std::span<const double> u,
                    std::span<const double> s, double g_u) {
  if (g.segment) {
    const SegmentQuadratic q = g.segment(u, s);
    const double c2 = q[0], c1 = q[1], c0 = q[2];
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc >= 0.0) {
      const double den = -c1 + std::sqrt(disc);
      if (den > 0.0) {
        const double t = 2.0 * c0 / den;
        if (t > 0.0 && t <= 1.0) return t;
      }
    }
  }
  // Newton from t = 0; on a convex decreasing stretch the iterates increase
  // monotonically to the root.
  const Vector dir = subtract(s, u);
  const double ftol = 1e-10 * std::max(1.0, std::abs(g_u));
  double lo = 0.0, hi = 1.0;
  double t = 0.0;
  double h = g_u;
  for (int it = 0; it < 100; ++it) {
    if (std::abs(h) <= ftol && h <= 0.0) return t;
    const Vector xt = lerp(u, s, t);
    const double dh = dot(g.grad(xt), dir);
    if (!(dh < 0.0)) break;
    const double next = t - h / dh;
    if (!(next > lo && next < hi)) break;
    t = next;
    h = g.eval(lerp(u, s, t));
    if (h > 0.0) {
      lo = t;
    } else {
      hi = t;
      if (std::abs(h) <= ftol) return t;
    }
  }
  for (int it = 0; it < 200 && hi - lo > 4.0 * kEps; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double hm = g.eval(lerp(u, s, mid));
    if (hm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
      if (std::abs(hm) <= ftol) break;
    }
  }
  return hi;
}

}  // namespace

RetractionResult retract_convex(std::span<const double> u_tilde, std::span<const double> slater,
                                const std::vector<SmoothConstraint>& g) {
  if (g.empty()) throw Error(ErrorCode::kInvalidArgument, "retract_convex: no constraints");
  if (u_tilde.size() != slater.size()) {
    throw Error(ErrorCode::kInvalidArgument, "retract_convex: dimension mismatch");
  }
  RetractionResult out;
  std::vector<double> g_u(g.size());
  bool violated = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g_u[i] = g[i].eval(u_tilde);
    violated = violated || g_u[i] > 0.0;
  }
  out.g_u = g_u[0];
  if (!violated) {
    out.x_tilde.assign(u_tilde.begin(), u_tilde.end());
    return out;
  }
  double tau = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g_u[i] <= 0.0) continue;
    if (!(g[i].eval(slater) < 0.0)) {
      throw Error(ErrorCode::kRetractionFailed,
                  "retract_convex: anchor is not strictly feasible, no root in (0, 1)");
    }
    tau = std::max(tau, segment_root(g[i], u_tilde, slater, g_u[i]));
  }
  // Rounding can leave g slightly positive at the root; step further in.
  double bump = 4.0 * kEps;
  for (int attempt = 0; attempt < 200; ++attempt) {
    out.x_tilde = tau >= 1.0 ? Vector(slater.begin(), slater.end()) : lerp(u_tilde, slater, tau);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& gi : g) worst = std::max(worst, gi.eval(out.x_tilde));
    if (worst <= 0.0 || tau >= 1.0) break;
    tau = std::min(1.0, tau + bump * std::max(tau, 1e-300));
    bump *= 16.0;
  }
  out.tau = tau;
  return out;
}

double beta0_update(const IterateState& prev, const FPAConfig& cfg) {
  const double raw = prev.beta == prev.beta0 ? cfg.beta_growth * prev.beta0 : prev.beta;
  return std::min(std::max(cfg.beta_lo, raw), cfg.beta_hi);
}

double termination_measure(const IterateState& state, const ProblemInstance& inst,
                           double g1_at_u) {
  const Vector xi_u = inst.objective.p2_subgrad(state.u);
  const double lg = inst.constraints.front().grad_lipschitz;
  const double big_l = state.lambda * lg + 1.0 / state.beta;
  const double stationarity =
      norm2(subtract(xi_u, state.xi)) + big_l * norm2(subtract(state.u, state.x));
  const double feasibility = 100.0 * std::max(std::abs(state.lambda * g1_at_u), g1_at_u);
  return std::max(stationarity, feasibility);
}

bool check_termination(const IterateState& state, const ProblemInstance& inst, double tol,
                       double g1_at_u) {
  return termination_measure(state, inst, g1_at_u) <= tol * std::max(norm2(state.u), 1.0);
}

bool check_termination(const IterateState& state, const ProblemInstance& inst, double tol) {
  return check_termination(state, inst, tol, inst.constraints.front().eval(state.u));
}

ProblemInstance with_mu(const ProblemInstance& inst, double mu) {
  ProblemInstance out = inst;
  out.objective = make_group_l12_objective(inst.objective.groups, mu);
  return out;
}

namespace detail {

bool is_feasible_start(const ProblemInstance& inst, std::span<const double> x) {
  if (!inst.set.contains(x)) return false;
  if (inst.constraint_kind == ConstraintKind::kCustomConvex) return inst.max_constraint(x) <= 0.0;
  return relative_constraint_slack(inst, x) <= 1e-10;
}

RunReport run_fpa(const ProblemInstance& inst, std::span<const double> x0, const FPAConfig& cfg,
                  const RetractorFactory& make_retractor) {
  if (inst.constraints.size() != 1) {
    throw Error(ErrorCode::kUnsupported, "fpa: exactly one smooth constraint is supported");
  }
  if (x0.size() != inst.dimension()) {
    throw Error(ErrorCode::kInvalidArgument, "fpa: x0 has the wrong dimension");
  }
  if (!is_feasible_start(inst, x0)) {
    throw Error(ErrorCode::kInfeasibleStart, "fpa: x0 is not feasible");
  }
  const auto start = std::chrono::steady_clock::now();
  const SmoothConstraint& g = inst.constraints.front();
  const DCObjective& objective = inst.objective;

  RunReport report;
  Vector x(x0.begin(), x0.end());
  double obj = objective.eval(x);
  double beta0 = cfg.beta_init;
  std::optional<double> warm;
  IterateState state;

  for (int k = 0; k < cfg.max_iter; ++k) {
    const Vector xi = objective.p2_subgrad(x);
    const double gx = g.eval(x);
    const Vector a = g.grad(x);
    const double r = dot(a, x) - gx;
    const RetractFn retract = make_retractor(x);

    double beta = beta0;
    int backtracks = 0;
    SubproblemSolution sol;
    TrialRetraction trial;
    double step = 0.0;
    double obj_new = 0.0;
    while (true) {
      Vector y = x;
      axpy(beta, xi, y);
      const SubproblemSpec spec{y, beta, a, r, &inst.set};
      sol = solve_linearized_prox(spec, warm, cfg.root);
      trial = retract(sol.x_star);
      if (trial.result.tau > 0.0 && trial.tau_bound > 0.0) {
        ++report.tau_bound_checks;
        if (trial.result.tau > trial.tau_bound) ++report.tau_bound_violations;
      }
      step = norm2(subtract(sol.x_star, x));
      obj_new = objective.eval(trial.result.x_tilde);
      if (obj_new <= obj - 0.5 * cfg.c * step * step) break;
      beta *= cfg.eta;
      ++backtracks;
      if (beta < cfg.beta_floor) {
        throw Error(ErrorCode::kLineSearchExhausted,
                    "fpa: line search drove beta below the floor");
      }
    }
    report.total_backtracks += static_cast<std::size_t>(backtracks);

    state.x = x;
    state.u = sol.x_star;
    state.xi = xi;
    state.beta = beta;
    state.beta0 = beta0;
    state.tau = trial.result.tau;
    state.lambda = sol.lambda_star;
    state.obj = obj;
    state.k = static_cast<std::size_t>(k);
    const bool critical = check_termination(state, inst, cfg.tol, trial.result.g_u);

    if (cfg.log_history) {
      IterationRecord rec;
      rec.k = state.k;
      rec.obj = obj;
      rec.obj_next = obj_new;
      rec.step_norm = step;
      rec.beta = beta;
      rec.beta0 = beta0;
      rec.tau = trial.result.tau;
      rec.tau_bound = trial.tau_bound;
      rec.lambda = sol.lambda_star;
      rec.slack_next = relative_constraint_slack(inst, trial.result.x_tilde);
      rec.in_box_next = inst.set.contains(trial.result.x_tilde);
      rec.backtracks = backtracks;
      rec.newton_iters = sol.newton_iters;
      report.history.push_back(rec);
    }

    x = std::move(trial.result.x_tilde);
    obj = obj_new;
    warm = sol.lambda_star;
    report.iterations = static_cast<std::size_t>(k) + 1;
    report.final_lambda = sol.lambda_star;
    report.final_beta = beta;
    if (critical) {
      report.termination = Termination::kCriticality;
      break;
    }
    if (beta <= cfg.small_beta) {
      report.termination = Termination::kSmallStepsize;
      break;
    }
    beta0 = beta0_update(state, cfg);
  }
  report.final_x = std::move(x);
  report.cpu_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace detail

RunReport fpa_solve(const ProblemInstance& inst, std::span<const double> x0,
                    const FPAConfig& cfg) {
  if (inst.constraint_kind == ConstraintKind::kLorentzian) {
    throw Error(ErrorCode::kUnsupported,
                "fpa_solve: nonconvex loss constraints need fpa_nonconvex_solve");
  }
  const Vector& slater = inst.slater_point;
  double g_slater = -std::numeric_limits<double>::infinity();
  double lip = 0.0;
  for (const auto& gi : inst.constraints) {
    g_slater = std::max(g_slater, gi.eval(slater));
    lip = std::max(lip, gi.grad_lipschitz);
  }
  if (!(g_slater < 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fpa_solve: anchor point is not strictly feasible");
  }
  auto factory = [&](const Vector& x) -> detail::RetractFn {
    return [&, x](const Vector& u) {
      detail::TrialRetraction t;
      t.result = retract_convex(u, slater, inst.constraints);
      const double d = norm2(subtract(u, x));
      t.tau_bound = lip * d * d / (-2.0 * g_slater);
      return t;
    };
  };
  return detail::run_fpa(inst, x0, cfg, factory);
}

}  // namespace dcfeas
