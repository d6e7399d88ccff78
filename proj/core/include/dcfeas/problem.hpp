#pragma once

// Problem representation: a DC objective P1 - P2 with a group structure,
// smooth inequality constraints given as oracles, the compact group box C
// and a strictly feasible anchor point.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dcfeas/linalg.hpp"
#include "dcfeas/lorentzian.hpp"

namespace dcfeas {

/// Ordered partition of {0, ..., n-1} into nonempty disjoint groups.
class GroupStructure {
 public:
  GroupStructure() = default;
  /// Throws if the groups do not partition {0, ..., n-1}.
  GroupStructure(std::size_t n, std::vector<std::vector<std::size_t>> groups);

  /// Contiguous blocks {0..j-1}, {j..2j-1}, ...; n must be divisible by j.
  static GroupStructure contiguous(std::size_t n, std::size_t block_size);
  /// Pairs {i, i + half} for i < half (real/imaginary parts of a complex vector).
  static GroupStructure complex_pairs(std::size_t half);
  static GroupStructure singletons(std::size_t n);

  std::size_t dimension() const { return n_; }
  std::size_t size() const { return groups_.size(); }
  const std::vector<std::size_t>& operator[](std::size_t g) const { return groups_[g]; }
  const std::vector<std::vector<std::size_t>>& groups() const { return groups_; }

  double group_norm(std::span<const double> x, std::size_t g) const;
  /// sum_J ||x_J||
  double sum_of_norms(std::span<const double> x) const;
  /// max_J ||x_J||
  double max_norm(std::span<const double> x) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<std::size_t>> groups_;
};

/// {x : max_J ||x_J|| <= radius}
struct GroupBoxSet {
  GroupStructure groups;
  double radius = 0.0;

  static constexpr double kMembershipSlack = 1e-12;
  bool contains(std::span<const double> x) const;
};

/// Blockwise radial projection: z_J = min{1, M / ||y_J||} y_J.
Vector project_group_box(const GroupBoxSet& set, std::span<const double> y);

/// Projection onto {x : ||x||_inf <= radius}.
Vector project_linf_box(double radius, std::span<const double> y);

/// P(x) = P1(x) - P2(x). The subproblem solvers assume P1 is the group norm
/// over `groups`; the oracles are what the drivers evaluate.
struct DCObjective {
  std::function<double(std::span<const double>)> p1_eval;
  std::function<double(std::span<const double>)> p2_eval;
  std::function<Vector(std::span<const double>)> p2_subgrad;
  GroupStructure groups;
  double mu = 0.0;

  double eval(std::span<const double> x) const { return p1_eval(x) - p2_eval(x); }
};

/// P1(x) = sum_J ||x_J||, P2(x) = mu ||x||, with the subgradient of P2 taken
/// as mu x / ||x|| (and 0 at the origin).
DCObjective make_group_l12_objective(GroupStructure groups, double mu);

/// Coefficients (c2, c1, c0) with g((1 - t) u + t v) = c2 t^2 + c1 t + c0.
using SegmentQuadratic = std::array<double, 3>;

struct SmoothConstraint {
  std::function<double(std::span<const double>)> eval;
  std::function<Vector(std::span<const double>)> grad;
  double grad_lipschitz = 0.0;
  /// Present when g is quadratic; enables the closed-form retraction root.
  std::function<SegmentQuadratic(std::span<const double>, std::span<const double>)> segment;
};

/// g(x) = ||a x - b||^2 - sigma^2 with L_g = 2 ||a||^2.
SmoothConstraint make_least_squares_constraint(std::shared_ptr<const DenseMatrix> a,
                                               std::shared_ptr<const Vector> b,
                                               double sigma, double a_norm);

/// g(x) = sum_i w_i (a_i^T x - b_i)^2 - level with L_g = 2 max_i w_i ||a||^2.
SmoothConstraint make_weighted_quadratic_constraint(std::shared_ptr<const DenseMatrix> a,
                                               std::shared_ptr<const Vector> b,
                                                    Vector weights, double level,
                                                    double a_norm);

/// g(x) = ell(a x - b) - sigma with L_g = 2 vartheta ||a||^2.
SmoothConstraint make_loss_constraint(std::shared_ptr<const DenseMatrix> a,
                                               std::shared_ptr<const Vector> b, PhiFunction phi,
                                      double sigma, double a_norm);

enum class ConstraintKind { kConvexBall, kLorentzian, kCustomConvex };

const char* to_string(ConstraintKind kind);

/// Reproducibility record attached by the instance generators.
struct InstanceMeta {
  std::string kind;  // "e3", "e4" or "custom"
  std::size_t p = 0, n = 0, k = 0;
  std::uint64_t seed = 0;
  std::string rng = "mt19937_64";
  double cpu_qr = 0.0;
  double cpu_slater = 0.0;
};

/// Immutable after construction; copy-safe (the constraint oracles refer to
/// the instance's own matrix through a shared handle).
struct ProblemInstance {
  std::shared_ptr<const DenseMatrix> a;
  std::shared_ptr<const Vector> b;
  DCObjective objective;
  ConstraintKind constraint_kind = ConstraintKind::kConvexBall;
  double sigma = 0.0;
  double gamma = 0.0;
  PhiFunction phi;  // meaningful for kLorentzian only
  GroupBoxSet set;
  Vector slater_point;
  std::optional<Vector> ground_truth;
  double a_norm = 0.0;  // cached spectral norm of a
  std::vector<SmoothConstraint> constraints;
  InstanceMeta meta;

  std::size_t dimension() const { return set.groups.dimension(); }
  /// max_i g_i(x)
  double max_constraint(std::span<const double> x) const;
};

/// Builds an (E3)-type instance: group-l12 objective, ||a x - b|| <= sigma,
/// group box of the given radius. Validates the Slater point.
ProblemInstance make_convex_ball_instance(DenseMatrix a, Vector b, GroupStructure groups,
                                          double mu, double sigma, double radius,
                                          Vector slater, std::optional<Vector> ground_truth);

/// Builds an (E4)-type instance: ell(a x - b) <= sigma with a x_slater = b.
ProblemInstance make_lorentzian_instance(DenseMatrix a, Vector b, GroupStructure groups,
                                         double mu, PhiFunction phi, double sigma, double radius,
                                         Vector slater, std::optional<Vector> ground_truth);

/// Normalized constraint residual: (||ax-b|| - sigma)/sigma for the ball,
/// (ell(ax-b) - sigma)/sigma for the Lorentzian constraint and max_i g_i(x)
/// for custom constraints.
double eval_residual(const ProblemInstance& inst, std::span<const double> x);

/// Relative constraint slack used by the feasibility checks: g(x)/sigma^2
/// for the ball and (ell(ax-b) - sigma)/sigma for the Lorentzian constraint.
double relative_constraint_slack(const ProblemInstance& inst, std::span<const double> x);

/// ||x - x_orig|| / max{1, ||x_orig||}
double recovery_error(const ProblemInstance& inst, std::span<const double> x);

/// Radius M = (1 - mu)^{-1} [sum_J ||x_J|| - mu ||x||] making the box
/// formulation equivalent to the unboxed model (anchored at x).
double box_radius_from_anchor(const GroupStructure& groups, double mu, std::span<const double> x);

}  // namespace dcfeas
