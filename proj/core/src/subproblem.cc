#include "dcfeas/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "dcfeas/errors.hpp"

namespace dcfeas {

namespace {

void validate(const SubproblemSpec& spec) {
  if (spec.set == nullptr) throw Error(ErrorCode::kInvalidArgument, "subproblem: missing set");
  const std::size_t n = spec.set->groups.dimension();
  if (spec.y.size() != n || spec.a_lin.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "subproblem: dimension mismatch");
  }
  if (!(spec.beta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "subproblem: beta must be > 0");
}

// Shrink-and-clip factor for a block with ||w_J|| = nw.
double block_factor(double nw, double beta, double radius) {
  if (nw <= beta) return 0.0;
  return std::min(1.0 - beta / nw, radius / nw);
}

// Keeps the last few T evaluations for diagnostics.
class TraceBuffer {
 public:
  void push(double v) {
    if (values_.size() == 8) values_.pop_front();
    values_.push_back(v);
  }
  std::vector<double> values() const { return {values_.begin(), values_.end()}; }

 private:
  std::deque<double> values_;
};

struct RootResult {
  double lambda = 0.0;
  int newton_iters = 0;
  int bisection_iters = 0;
};

// Given |T(lambda)| small but T(lambda) < 0, moves right to a point with
// 0 <= T <= tol so that the returned primal point satisfies the linear
// constraint; the retraction would otherwise amplify the violation.
double polish_feasible(const SubproblemSpec& spec, double lambda, double t, double deriv,
                       double hi_limit, const DualRootOptions& opts, int* steps) {
  double lo = lambda;
  double step = std::max(-t / std::max(deriv, std::numeric_limits<double>::min()),
                         4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, lambda));
  double hi = lo;
  bool bracketed = false;
  for (int i = 0; i < 64; ++i) {
    hi = std::min(lo + step, hi_limit);
    const double th = dual_function(spec, hi);
    ++*steps;
    if (th >= 0.0) {
      if (th <= opts.t_tol) return hi;
      bracketed = true;
      break;
    }
    lo = hi;
    step *= 2.0;
    if (hi >= hi_limit) break;
  }
  if (!bracketed) return hi;
  for (int i = 0; i < opts.max_bisection; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double tm = dual_function(spec, mid);
    ++*steps;
    if (tm >= 0.0) {
      hi = mid;
      if (tm <= opts.t_tol) break;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Root of the nondecreasing T on [lo, hi_limit] given T(lo) < 0. hi_limit may
// be +inf, in which case a bracket is found by doubling.
RootResult find_dual_root(const SubproblemSpec& spec, double lo, double hi_limit, double start,
                          const DualRootOptions& opts) {
  TraceBuffer trace;
  RootResult out;
  double bracket_lo = lo;
  double bracket_hi = hi_limit;
  bool have_hi = std::isfinite(hi_limit);

  auto evaluate = [&](double lambda, double* deriv) {
    const double t = dual_function(spec, lambda, deriv);
    trace.push(t);
    if (t < 0.0) {
      bracket_lo = std::max(bracket_lo, lambda);
    } else if (lambda < bracket_hi || !have_hi) {
      bracket_hi = lambda;
      have_hi = true;
    }
    return t;
  };

  // Semismooth Newton with the hyperplane-projection line search; in one
  // dimension the projection step lands exactly on the trial point.
  double lambda = std::clamp(start, lo, hi_limit);
  double deriv = 0.0;
  double t = evaluate(lambda, &deriv);
  bool fallback = false;
  while (std::abs(t) > opts.t_tol) {
    if (out.newton_iters >= opts.max_newton) {
      fallback = true;
      break;
    }
    ++out.newton_iters;
    const double mu = opts.mu_scale * std::sqrt(std::abs(t));
    const double d = -t / (deriv + mu);
    double alpha = 1.0;
    double z = lambda;
    double tz = t;
    double dz = deriv;
    bool accepted = false;
    while (alpha >= opts.min_step) {
      z = std::clamp(lambda + alpha * d, lo, hi_limit);
      tz = evaluate(z, &dz);
      if (-tz * d >= opts.slope * mu * d * d || std::abs(tz) <= opts.t_tol) {
        accepted = true;
        break;
      }
      alpha *= opts.armijo_factor;
    }
    if (!accepted) {
      fallback = true;
      break;
    }
    lambda = z;
    t = tz;
    deriv = dz;
  }
  if (!fallback) {
    out.lambda = t >= 0.0 ? lambda : polish_feasible(spec, lambda, t, deriv, hi_limit, opts,
                                                     &out.bisection_iters);
    return out;
  }

  if (!have_hi) {
    double hi = std::max(1.0, 2.0 * bracket_lo);
    for (int i = 0; i < opts.max_bisection; ++i) {
      if (evaluate(hi, nullptr) >= 0.0) break;
      hi *= 2.0;
    }
    if (!have_hi) {
      throw SubproblemError("subproblem: could not bracket a root of T (Slater condition?)",
                            trace.values());
    }
  }
  double a = bracket_lo;
  double b = bracket_hi;
  for (int i = 0; i < opts.max_bisection; ++i) {
    ++out.bisection_iters;
    const double mid = 0.5 * (a + b);
    const double tm = evaluate(mid, nullptr);
    if (tm >= 0.0 && tm <= opts.t_tol) {
      out.lambda = mid;
      return out;
    }
    if (tm < 0.0) {
      a = mid;
    } else {
      b = mid;
    }
    if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, b)) break;
  }
  // Interval collapsed to machine precision: keep the side with T >= 0, where
  // the linear constraint holds.
  if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, b)) {
    out.lambda = b;
    return out;
  }
  throw SubproblemError("subproblem: root of T not found within the iteration cap",
                        trace.values());
}

double linear_violation(const SubproblemSpec& spec, std::span<const double> x) {
  return dot(spec.a_lin, x) - spec.r_lin;
}

}  // namespace

Vector group_shrink_clip(const SubproblemSpec& spec, double lambda) {
  validate(spec);
  const GroupStructure& groups = spec.set->groups;
  const double radius = spec.set->radius;
  Vector x(spec.y.size(), 0.0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double nw2 = 0.0;
    for (std::size_t i : groups[g]) {
      const double w = spec.y[i] - lambda * spec.beta * spec.a_lin[i];
      x[i] = w;
      nw2 += w * w;
    }
    const double f = block_factor(std::sqrt(nw2), spec.beta, radius);
    for (std::size_t i : groups[g]) x[i] *= f;
  }
  return x;
}

double dual_function(const SubproblemSpec& spec, double lambda) {
  return dual_function(spec, lambda, nullptr);
}

double dual_function(const SubproblemSpec& spec, double lambda, double* derivative) {
  const GroupStructure& groups = spec.set->groups;
  const double beta = spec.beta;
  const double radius = spec.set->radius;
  double inner = 0.0;
  double slope = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double nw2 = 0.0;
    double aw = 0.0;
    double aa = 0.0;
    for (std::size_t i : groups[g]) {
      const double ai = spec.a_lin[i];
      const double w = spec.y[i] - lambda * beta * ai;
      nw2 += w * w;
      aw += ai * w;
      aa += ai * ai;
    }
    const double nw = std::sqrt(nw2);
    if (nw <= beta) continue;
    if (nw <= radius + beta) {
      const double f = 1.0 - beta / nw;
      inner += f * aw;
      slope += beta * (f * aa + beta * aw * aw / (nw2 * nw));
    } else {
      const double f = radius / nw;
      inner += f * aw;
      slope += beta * f * (aa - aw * aw / nw2);
    }
  }
  if (derivative != nullptr) *derivative = slope;
  return spec.r_lin - inner;
}

double subproblem_objective(const SubproblemSpec& spec, std::span<const double> x) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - spec.y[i];
    d2 += d * d;
  }
  return spec.set->groups.sum_of_norms(x) + d2 / (2.0 * spec.beta);
}

SubproblemSolution solve_linearized_prox(const SubproblemSpec& spec,
                                         std::optional<double> warm_lambda,
                                         const DualRootOptions& opts) {
  validate(spec);
  SubproblemSolution sol;
  const double t0 = dual_function(spec, 0.0);
  if (t0 >= 0.0) {
    sol.lambda_star = 0.0;
  } else {
    const double start = std::max(0.0, warm_lambda.value_or(0.0));
    const RootResult root =
        find_dual_root(spec, 0.0, std::numeric_limits<double>::infinity(), start, opts);
    sol.lambda_star = root.lambda;
    sol.newton_iters = root.newton_iters;
    sol.bisection_iters = root.bisection_iters;
  }
  sol.x_star = group_shrink_clip(spec, sol.lambda_star);
  const double viol = linear_violation(spec, sol.x_star);
  sol.kkt_residual = std::abs(sol.lambda_star * viol) + std::max(0.0, viol);
  return sol;
}

EsqmSubproblemSolution solve_esqm_subproblem(const SubproblemSpec& spec,
                                             std::optional<double> warm_lambda,
                                             const DualRootOptions& opts) {
  validate(spec);
  EsqmSubproblemSolution out;
  SubproblemSolution& sol = out.solution;
  const double cap = 1.0 / spec.beta;
  const double t0 = dual_function(spec, 0.0);
  const double tcap = dual_function(spec, cap);
  if (t0 >= 0.0) {
    sol.lambda_star = 0.0;
  } else if (tcap <= 0.0) {
    // Multiplier saturates at 1/beta; the slack absorbs the violation.
    sol.lambda_star = cap;
    out.slack = std::max(0.0, -tcap);
  } else {
    const double start = std::clamp(warm_lambda.value_or(0.0), 0.0, cap);
    const RootResult root = find_dual_root(spec, 0.0, cap, start, opts);
    sol.lambda_star = root.lambda;
    sol.newton_iters = root.newton_iters;
    sol.bisection_iters = root.bisection_iters;
  }
  sol.x_star = group_shrink_clip(spec, sol.lambda_star);
  const double viol = linear_violation(spec, sol.x_star) - out.slack;
  sol.kkt_residual = std::abs(sol.lambda_star * viol) + std::max(0.0, viol);
  return out;
}

}  // namespace dcfeas
