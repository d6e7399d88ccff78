#include "dcfeas/initializer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dcfeas/errors.hpp"
#include "dcfeas/lorentzian.hpp"

namespace dcfeas {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool feasible(const ProblemInstance& inst, std::span<const double> x) {
  return inst.set.contains(x) && inst.max_constraint(x) <= 0.0;
}

Vector finish(const ProblemInstance& inst, Vector x, std::string* label) {
  if (feasible(inst, x)) {
    if (label) *label = kConvexWarmStart;
    return x;
  }
  if (label) *label = kAnchorFallback;
  return inst.slater_point;
}

// Steps from x toward the anchor by at least tau, increasing tau until the
// point satisfies every constraint in floating point.
Vector step_toward_anchor(const ProblemInstance& inst, std::span<const double> x, double tau) {
  const Vector& anchor = inst.slater_point;
  double bump = 4.0 * kEps;
  Vector out;
  for (int attempt = 0; attempt < 200; ++attempt) {
    if (tau >= 1.0) return anchor;
    out = lerp(x, anchor, tau);
    if (inst.max_constraint(out) <= 0.0) return out;
    tau = std::min(1.0, tau + bump * std::max(tau, 1e-300));
    bump *= 16.0;
  }
  return anchor;
}

}  // namespace

Vector pull_back_least_squares(const ProblemInstance& inst, std::span<const double> x) {
  if (inst.constraint_kind != ConstraintKind::kConvexBall) {
    throw Error(ErrorCode::kInvalidArgument, "pull_back_least_squares: needs a ball constraint");
  }
  const DenseMatrix& a = *inst.a;
  const Vector d0 = residual(a, x, *inst.b);
  const double s2 = inst.sigma * inst.sigma;
  const double c0 = dot(d0, d0) - s2;
  if (c0 <= 0.0) return Vector(x.begin(), x.end());
  const Vector e = subtract(residual(a, inst.slater_point, *inst.b), d0);
  const double c2 = dot(e, e);
  const double c1 = 2.0 * dot(d0, e);
  const double disc = std::max(0.0, c1 * c1 - 4.0 * c2 * c0);
  const double den = -c1 + std::sqrt(disc);
  const double tau = den > 0.0 ? std::min(1.0, 2.0 * c0 / den) : 1.0;
  return step_toward_anchor(inst, x, tau);
}

double loss_scale_root(const PhiFunction& phi, std::span<const double> v, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "loss_scale_root: sigma <= 0");
  if (ell_eval(phi, v) <= sigma) return 1.0;
  Vector v2(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) v2[i] = v[i] * v[i];
  double s = 0.0;
  for (int it = 0; it < 100; ++it) {
    double h = -sigma;
    double dh = 0.0;
    for (double w : v2) {
      h += phi.eval(s * w);
      dh += phi.right_derivative(s * w) * w;
    }
    if (h >= -1e-14 * sigma || !(dh > 0.0)) break;
    const double next = std::min(1.0, s - h / dh);
    if (!(next > s)) break;
    s = next;
  }
  return s;
}

Vector pull_back_loss(const ProblemInstance& inst, std::span<const double> x) {
  if (inst.constraint_kind != ConstraintKind::kLorentzian) {
    throw Error(ErrorCode::kInvalidArgument, "pull_back_loss: needs a loss constraint");
  }
  Vector v = residual(*inst.a, x, *inst.b);
  if (ell_eval(inst.phi, v) <= inst.sigma) return Vector(x.begin(), x.end());
  for (double& t : v) t = -t;
  const double s = loss_scale_root(inst.phi, v, inst.sigma);
  return step_toward_anchor(inst, x, 1.0 - std::sqrt(s));
}

Vector init_e3(const ProblemInstance& inst, const InitOptions& opts, std::string* label) {
  if (inst.constraint_kind != ConstraintKind::kConvexBall) {
    throw Error(ErrorCode::kInvalidArgument, "init_e3: needs a ball-constrained instance");
  }
  try {
    FPAConfig cfg;
    cfg.tol = opts.tol;
    cfg.max_iter = opts.max_iter_e3;
    const RunReport pre = fpa_solve(with_mu(inst, 0.0), inst.slater_point, cfg);
    const Vector boxed = project_group_box(inst.set, pre.final_x);
    return finish(inst, pull_back_least_squares(inst, boxed), label);
  } catch (const Error&) {
    if (label) *label = kAnchorFallback;
    return inst.slater_point;
  }
}

Vector init_e4(const ProblemInstance& inst, const InitOptions& opts, std::string* label) {
  if (inst.constraint_kind != ConstraintKind::kLorentzian) {
    throw Error(ErrorCode::kInvalidArgument, "init_e4: needs a loss-constrained instance");
  }
  try {
    const DenseMatrix& a = *inst.a;
    const Vector& b = *inst.b;
    const Vector& anchor = inst.slater_point;
    const double tau0 = 1.0 - std::sqrt(loss_scale_root(inst.phi, b, inst.sigma));
    Vector y0 = anchor;
    for (double& v : y0) v *= tau0;

    // Convex auxiliary problem: group-l1 over the majorant ellipsoid at y0.
    // y0 sits on its boundary, so the interpolating anchor serves as the
    // strictly feasible point and y0 as the start.
    const MajorizationData m = build_majorization(inst.phi, a, b, inst.sigma, y0);
    ProblemInstance aux = with_mu(inst, 0.0);
    aux.constraint_kind = ConstraintKind::kCustomConvex;
    aux.sigma = m.sigma_tilde;
    aux.constraints = {
        make_weighted_quadratic_constraint(inst.a, inst.b, m.omega, m.sigma_tilde, inst.a_norm)};
    if (!(aux.max_constraint(y0) <= 0.0)) {
      y0 = retract_convex(y0, anchor, aux.constraints).x_tilde;
    }
    FPAConfig cfg;
    cfg.tol = opts.tol;
    cfg.max_iter = opts.max_iter_e4;
    const RunReport pre = fpa_solve(aux, y0, cfg);
    const Vector boxed = project_linf_box(inst.set.radius, pre.final_x);
    return finish(inst, pull_back_loss(inst, boxed), label);
  } catch (const Error&) {
    if (label) *label = kAnchorFallback;
    return inst.slater_point;
  }
}

}  // namespace dcfeas
