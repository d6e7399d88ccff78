#include "dcfeas/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dcfeas/errors.hpp"

namespace dcfeas {

GroupStructure::GroupStructure(std::size_t n, std::vector<std::vector<std::size_t>> groups)
    : n_(n), groups_(std::move(groups)) {
  std::vector<char> seen(n_, 0);
  std::size_t covered = 0;
  for (const auto& g : groups_) {
    if (g.empty()) throw Error(ErrorCode::kInvalidArgument, "GroupStructure: empty group");
    for (std::size_t i : g) {
      if (i >= n_ || seen[i]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "GroupStructure: index " + std::to_string(i) +
                        " out of range or in two groups");
      }
      seen[i] = 1;
      ++covered;
    }
  }
  if (covered != n_) {
    throw Error(ErrorCode::kInvalidArgument, "GroupStructure: groups do not cover all indices");
  }
}

GroupStructure GroupStructure::contiguous(std::size_t n, std::size_t block_size) {
  if (block_size == 0 || n % block_size != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "GroupStructure::contiguous: n = " + std::to_string(n) +
                    " not divisible by block size " + std::to_string(block_size));
  }
  std::vector<std::vector<std::size_t>> groups(n / block_size);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t j = 0; j < block_size; ++j) groups[g].push_back(g * block_size + j);
  }
  return GroupStructure(n, std::move(groups));
}

GroupStructure GroupStructure::complex_pairs(std::size_t half) {
  std::vector<std::vector<std::size_t>> groups(half);
  for (std::size_t i = 0; i < half; ++i) groups[i] = {i, i + half};
  return GroupStructure(2 * half, std::move(groups));
}

GroupStructure GroupStructure::singletons(std::size_t n) {
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[i] = {i};
  return GroupStructure(n, std::move(groups));
}

double GroupStructure::group_norm(std::span<const double> x, std::size_t g) const {
  double s = 0.0;
  for (std::size_t i : groups_[g]) s += x[i] * x[i];
  return std::sqrt(s);
}

double GroupStructure::sum_of_norms(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t g = 0; g < groups_.size(); ++g) s += group_norm(x, g);
  return s;
}

double GroupStructure::max_norm(std::span<const double> x) const {
  double m = 0.0;
  for (std::size_t g = 0; g < groups_.size(); ++g) m = std::max(m, group_norm(x, g));
  return m;
}

bool GroupBoxSet::contains(std::span<const double> x) const {
  return groups.max_norm(x) <= radius * (1.0 + kMembershipSlack);
}

Vector project_group_box(const GroupBoxSet& set, std::span<const double> y) {
  Vector z(y.begin(), y.end());
  for (std::size_t g = 0; g < set.groups.size(); ++g) {
    const double nrm = set.groups.group_norm(y, g);
    if (nrm > set.radius) {
      const double factor = set.radius / nrm;
      for (std::size_t i : set.groups[g]) z[i] *= factor;
    }
  }
  return z;
}

Vector project_linf_box(double radius, std::span<const double> y) {
  Vector z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) z[i] = std::clamp(y[i], -radius, radius);
  return z;
}

DCObjective make_group_l12_objective(GroupStructure groups, double mu) {
  if (mu < 0.0) throw Error(ErrorCode::kInvalidArgument, "objective: mu must be >= 0");
  DCObjective obj;
  obj.groups = std::move(groups);
  obj.mu = mu;
  auto structure = std::make_shared<const GroupStructure>(obj.groups);
  obj.p1_eval = [structure](std::span<const double> x) { return structure->sum_of_norms(x); };
  obj.p2_eval = [mu](std::span<const double> x) { return mu * norm2(x); };
  obj.p2_subgrad = [mu](std::span<const double> x) {
    Vector xi(x.size(), 0.0);
    const double nrm = norm2(x);
    if (nrm > 0.0 && mu > 0.0) {
      for (std::size_t i = 0; i < x.size(); ++i) xi[i] = mu * x[i] / nrm;
    }
    return xi;
  };
  return obj;
}

namespace {

double squared_norm(std::span<const double> v) { return dot(v, v); }

double weighted_squared_norm(std::span<const double> w, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i] * v[i];
  return s;
}

}  // namespace

SmoothConstraint make_least_squares_constraint(std::shared_ptr<const DenseMatrix> a,
                                               std::shared_ptr<const Vector> b, double sigma,
                                               double a_norm) {
  SmoothConstraint c;
  const double sigma2 = sigma * sigma;
  c.eval = [a, b, sigma2](std::span<const double> x) {
    return squared_norm(residual(*a, x, *b)) - sigma2;
  };
  c.grad = [a, b](std::span<const double> x) {
    Vector r = residual(*a, x, *b);
    for (double& v : r) v *= 2.0;
    return matvec_t(*a, r);
  };
  c.grad_lipschitz = 2.0 * a_norm * a_norm;
  c.segment = [a, b, sigma2](std::span<const double> u, std::span<const double> v) {
    const Vector du = residual(*a, u, *b);
    const Vector e = subtract(residual(*a, v, *b), du);
    return SegmentQuadratic{squared_norm(e), 2.0 * dot(du, e), squared_norm(du) - sigma2};
  };
  return c;
}

SmoothConstraint make_weighted_quadratic_constraint(std::shared_ptr<const DenseMatrix> a,
                                                    std::shared_ptr<const Vector> b,
                                                    Vector weights, double level, double a_norm) {
  auto w = std::make_shared<const Vector>(std::move(weights));
  SmoothConstraint c;
  c.eval = [a, b, w, level](std::span<const double> x) {
    return weighted_squared_norm(*w, residual(*a, x, *b)) - level;
  };
  c.grad = [a, b, w](std::span<const double> x) {
    Vector r = residual(*a, x, *b);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] *= 2.0 * (*w)[i];
    return matvec_t(*a, r);
  };
  const double wmax = w->empty() ? 0.0 : *std::max_element(w->begin(), w->end());
  c.grad_lipschitz = 2.0 * wmax * a_norm * a_norm;
  c.segment = [a, b, w, level](std::span<const double> u, std::span<const double> v) {
    const Vector du = residual(*a, u, *b);
    const Vector e = subtract(residual(*a, v, *b), du);
    double cross = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) cross += (*w)[i] * du[i] * e[i];
    return SegmentQuadratic{weighted_squared_norm(*w, e), 2.0 * cross,
                            weighted_squared_norm(*w, du) - level};
  };
  return c;
}

SmoothConstraint make_loss_constraint(std::shared_ptr<const DenseMatrix> a,
                                      std::shared_ptr<const Vector> b, PhiFunction phi,
                                      double sigma, double a_norm) {
  SmoothConstraint c;
  c.eval = [a, b, phi, sigma](std::span<const double> x) {
    return ell_eval(phi, residual(*a, x, *b)) - sigma;
  };
  c.grad = [a, b, phi](std::span<const double> x) {
    return matvec_t(*a, ell_grad(phi, residual(*a, x, *b)));
  };
  c.grad_lipschitz = lipschitz_ell(phi) * a_norm * a_norm;
  return c;
}

const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kConvexBall: return "convex_ball";
    case ConstraintKind::kLorentzian: return "lorentzian";
    case ConstraintKind::kCustomConvex: return "custom_convex";
  }
  return "unknown";
}

double ProblemInstance::max_constraint(std::span<const double> x) const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& c : constraints) m = std::max(m, c.eval(x));
  return m;
}

namespace {

void check_shapes(const DenseMatrix& a, const Vector& b, const GroupStructure& groups,
                  const Vector& slater, const std::optional<Vector>& truth) {
  if (a.rows() != b.size() || a.cols() != groups.dimension() || slater.size() != a.cols() ||
      (truth && truth->size() != a.cols())) {
    throw Error(ErrorCode::kInvalidArgument, "instance: inconsistent dimensions");
  }
  if (!a.all_finite()) throw Error(ErrorCode::kInvalidArgument, "instance: non-finite matrix");
}

ProblemInstance base_instance(DenseMatrix a, Vector b, GroupStructure groups, double mu,
                              double radius, Vector slater, std::optional<Vector> truth) {
  check_shapes(a, b, groups, slater, truth);
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "instance: radius must be > 0");
  ProblemInstance inst;
  inst.a_norm = spectral_norm(a);
  inst.a = std::make_shared<const DenseMatrix>(std::move(a));
  inst.b = std::make_shared<const Vector>(std::move(b));
  inst.objective = make_group_l12_objective(groups, mu);
  inst.set = GroupBoxSet{std::move(groups), radius};
  inst.slater_point = std::move(slater);
  inst.ground_truth = std::move(truth);
  inst.meta.kind = "custom";
  inst.meta.p = inst.a->rows();
  inst.meta.n = inst.a->cols();
  if (!inst.set.contains(inst.slater_point)) {
    throw Error(ErrorCode::kInvalidArgument, "instance: Slater point outside the group box");
  }
  return inst;
}

}  // namespace

ProblemInstance make_convex_ball_instance(DenseMatrix a, Vector b, GroupStructure groups,
                                          double mu, double sigma, double radius, Vector slater,
                                          std::optional<Vector> ground_truth) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "instance: sigma must be > 0");
  ProblemInstance inst = base_instance(std::move(a), std::move(b), std::move(groups), mu, radius,
                                       std::move(slater), std::move(ground_truth));
  inst.constraint_kind = ConstraintKind::kConvexBall;
  inst.sigma = sigma;
  inst.constraints.push_back(make_least_squares_constraint(inst.a, inst.b, sigma, inst.a_norm));
  if (!(norm2(residual(*inst.a, inst.slater_point, *inst.b)) < sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "instance: Slater point not strictly feasible");
  }
  return inst;
}

ProblemInstance make_lorentzian_instance(DenseMatrix a, Vector b, GroupStructure groups,
                                         double mu, PhiFunction phi, double sigma, double radius,
                                         Vector slater, std::optional<Vector> ground_truth) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "instance: sigma must be > 0");
  ProblemInstance inst = base_instance(std::move(a), std::move(b), std::move(groups), mu, radius,
                                       std::move(slater), std::move(ground_truth));
  inst.constraint_kind = ConstraintKind::kLorentzian;
  inst.sigma = sigma;
  inst.phi = phi;
  inst.gamma = phi.kind() == PhiFunction::Kind::kLogLorentzian ? phi.parameter() : 0.0;
  inst.constraints.push_back(make_loss_constraint(inst.a, inst.b, phi, sigma, inst.a_norm));
  const double interp = norm2(residual(*inst.a, inst.slater_point, *inst.b));
  if (interp > 1e-10 * std::max(1.0, norm2(*inst.b))) {
    throw Error(ErrorCode::kInvalidArgument,
                "instance: anchor must interpolate a x = b (residual " + std::to_string(interp) +
                    ")");
  }
  return inst;
}

double eval_residual(const ProblemInstance& inst, std::span<const double> x) {
  switch (inst.constraint_kind) {
    case ConstraintKind::kConvexBall:
      return (norm2(residual(*inst.a, x, *inst.b)) - inst.sigma) / inst.sigma;
    case ConstraintKind::kLorentzian:
      return (ell_eval(inst.phi, residual(*inst.a, x, *inst.b)) - inst.sigma) / inst.sigma;
    case ConstraintKind::kCustomConvex:
      return inst.max_constraint(x);
  }
  return 0.0;
}

double relative_constraint_slack(const ProblemInstance& inst, std::span<const double> x) {
  switch (inst.constraint_kind) {
    case ConstraintKind::kConvexBall:
      return inst.constraints.front().eval(x) / (inst.sigma * inst.sigma);
    case ConstraintKind::kLorentzian:
      return inst.constraints.front().eval(x) / inst.sigma;
    case ConstraintKind::kCustomConvex:
      return inst.max_constraint(x);
  }
  return 0.0;
}

double recovery_error(const ProblemInstance& inst, std::span<const double> x) {
  if (!inst.ground_truth) {
    throw Error(ErrorCode::kMissingGroundTruth, "recovery_error: instance has no ground truth");
  }
  const Vector& truth = *inst.ground_truth;
  return norm2(subtract(x, truth)) / std::max(1.0, norm2(truth));
}

double box_radius_from_anchor(const GroupStructure& groups, double mu,
                              std::span<const double> x) {
  if (!(mu >= 0.0 && mu < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "box radius: mu must lie in [0, 1)");
  }
  return (groups.sum_of_norms(x) - mu * norm2(x)) / (1.0 - mu);
}

}  // namespace dcfeas
