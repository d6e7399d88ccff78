#include "dcfeas/problem.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "dcfeas/errors.hpp"
#include "dcfeas/fpa_convex.hpp"
#include "test_util.hpp"

namespace dcfeas {
namespace {

using testing::random_matrix;
using testing::random_vector;

TEST(GroupStructure, RejectsOverlapAndGaps) {
  EXPECT_THROW(GroupStructure(3, {{0, 1}, {1, 2}}), Error);
  EXPECT_THROW(GroupStructure(3, {{0, 1}}), Error);
  EXPECT_THROW(GroupStructure(2, {{0}, {}, {1}}), Error);
  EXPECT_NO_THROW(GroupStructure(3, {{2, 0}, {1}}));
}

TEST(GroupStructure, ComplexPairsCoupleRealAndImaginaryParts) {
  const GroupStructure g = GroupStructure::complex_pairs(3);
  ASSERT_EQ(g.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(g[i], (std::vector<std::size_t>{i, i + 3}));
}

TEST(GroupStructure, NormsByHand) {
  const GroupStructure g = GroupStructure::contiguous(4, 2);
  const Vector x{3.0, 4.0, 0.0, -1.0};
  EXPECT_DOUBLE_EQ(g.sum_of_norms(x), 6.0);
  EXPECT_DOUBLE_EQ(g.max_norm(x), 5.0);
}

TEST(ProjectGroupBox, InsideIsUnchanged) {
  const GroupBoxSet set{GroupStructure::contiguous(4, 2), 2.0};
  const Vector y{0.5, -1.0, 1.0, 1.0};
  EXPECT_EQ(project_group_box(set, y), y);
}

TEST(ProjectGroupBox, RadialProjectionByHand) {
  const GroupBoxSet set{GroupStructure::contiguous(2, 2), 1.0};
  const Vector z = project_group_box(set, Vector{3.0, 4.0});
  EXPECT_NEAR(z[0], 0.6, 1e-15);
  EXPECT_NEAR(z[1], 0.8, 1e-15);
}

TEST(ProjectGroupBox, NearestAmongRandomBoxPoints) {
  std::mt19937_64 gen(29);
  const GroupBoxSet set{GroupStructure::contiguous(6, 3), 1.0};
  for (int trial = 0; trial < 20; ++trial) {
    const Vector y = random_vector(6, gen, 2.0);
    const Vector p = project_group_box(set, y);
    ASSERT_TRUE(set.contains(p));
    const double d = norm2(subtract(y, p));
    for (int s = 0; s < 100; ++s) {
      const Vector z = project_group_box(set, random_vector(6, gen, 2.0));
      EXPECT_LE(d, norm2(subtract(y, z)) + 1e-12);
    }
  }
}

TEST(ProjectLinfBox, ClampsEachEntry) {
  EXPECT_EQ(project_linf_box(1.0, Vector{2.0, -3.0, 0.5}), (Vector{1.0, -1.0, 0.5}));
}

TEST(Objective, GroupL12ValueAndSubgradient) {
  const DCObjective obj = make_group_l12_objective(GroupStructure::contiguous(4, 2), 0.5);
  const Vector x{3.0, 4.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(obj.eval(x), 5.0 - 2.5);
  const Vector xi = obj.p2_subgrad(x);
  EXPECT_NEAR(xi[0], 0.3, 1e-15);
  EXPECT_NEAR(xi[1], 0.4, 1e-15);
  const Vector zero = obj.p2_subgrad(Vector(4, 0.0));
  for (double v : zero) EXPECT_EQ(v, 0.0);
}

TEST(Constraints, LeastSquaresGradientMatchesCentralDifferences) {
  std::mt19937_64 gen(31);
  auto a = std::make_shared<const DenseMatrix>(random_matrix(7, 10, gen));
  auto b = std::make_shared<const Vector>(random_vector(7, gen));
  const SmoothConstraint g = make_least_squares_constraint(a, b, 0.3, spectral_norm(*a));
  for (int trial = 0; trial < 50; ++trial) {
    Vector x = random_vector(10, gen);
    const Vector grad = g.grad(x);
    Vector fd(10);
    for (std::size_t i = 0; i < 10; ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
      const double keep = x[i];
      x[i] = keep + h;
      const double up = g.eval(x);
      x[i] = keep - h;
      const double down = g.eval(x);
      x[i] = keep;
      fd[i] = (up - down) / (2.0 * h);
    }
    EXPECT_LE(norm2(subtract(grad, fd)), 1e-6 * std::max(1.0, norm2(grad)));
  }
}

TEST(Constraints, SegmentQuadraticReproducesValues) {
  std::mt19937_64 gen(37);
  auto a = std::make_shared<const DenseMatrix>(random_matrix(5, 8, gen));
  auto b = std::make_shared<const Vector>(random_vector(5, gen));
  const SmoothConstraint g = make_least_squares_constraint(a, b, 0.7, spectral_norm(*a));
  ASSERT_TRUE(static_cast<bool>(g.segment));
  const Vector u = random_vector(8, gen);
  const Vector v = random_vector(8, gen);
  const SegmentQuadratic q = g.segment(u, v);
  for (double t : {0.0, 0.2, 0.5, 1.0}) {
    const double direct = g.eval(lerp(u, v, t));
    EXPECT_NEAR(q[0] * t * t + q[1] * t + q[2], direct, 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST(Metrics, ResidualAtAnchorIsMinusOne) {
  const ProblemInstance ball = testing::small_ball_instance(16, 64, 1);
  EXPECT_NEAR(eval_residual(ball, ball.slater_point), -1.0, 1e-10);
  const ProblemInstance loss = testing::small_loss_instance(8, 32, 1);
  EXPECT_NEAR(eval_residual(loss, loss.slater_point), -1.0, 1e-12);
}

TEST(Metrics, ResidualVanishesOnTheBoundary) {
  const ProblemInstance inst = testing::small_ball_instance(16, 64, 2);
  Vector far = inst.slater_point;
  for (double& v : far) v += 1.0;
  ASSERT_GT(inst.constraints.front().eval(far), 0.0);
  const RetractionResult r = retract_convex(far, inst.slater_point, inst.constraints);
  EXPECT_NEAR(eval_residual(inst, r.x_tilde), 0.0, 1e-10);
  EXPECT_LE(eval_residual(inst, r.x_tilde), 0.0);
}

TEST(Metrics, RecoveryErrorByDefinition) {
  ProblemInstance inst = testing::small_ball_instance(16, 64, 3);
  const Vector& truth = *inst.ground_truth;
  EXPECT_EQ(recovery_error(inst, truth), 0.0);
  Vector two(64, 0.0);
  two[0] = 2.0;
  inst.ground_truth = two;
  EXPECT_DOUBLE_EQ(recovery_error(inst, Vector(64, 0.0)), 1.0);
  std::mt19937_64 gen(41);
  const Vector x = random_vector(64, gen);
  EXPECT_NEAR(recovery_error(inst, x), norm2(subtract(x, two)) / 2.0, 1e-14);
  inst.ground_truth.reset();
  EXPECT_THROW(recovery_error(inst, x), Error);
}

TEST(Instances, ConstructorsValidateTheAnchor) {
  const DenseMatrix a = DenseMatrix::identity(2);
  const GroupStructure g = GroupStructure::singletons(2);
  EXPECT_THROW(make_convex_ball_instance(a, Vector{1.0, 0.0}, g, 0.5, 0.1, 10.0,
                                         Vector{0.0, 0.0}, std::nullopt),
               Error);
  EXPECT_NO_THROW(make_convex_ball_instance(a, Vector{1.0, 0.0}, g, 0.5, 0.1, 10.0,
                                            Vector{1.0, 0.0}, std::nullopt));
  EXPECT_THROW(make_lorentzian_instance(a, Vector{1.0, 0.0}, g, 0.5,
                                        PhiFunction::log_lorentzian(1.0), 0.1, 10.0,
                                        Vector{0.9, 0.0}, std::nullopt),
               Error);
}

TEST(Instances, BoxRadiusFromAnchor) {
  const GroupStructure g = GroupStructure::contiguous(4, 2);
  const Vector x{3.0, 4.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(box_radius_from_anchor(g, 0.5, x), (5.0 - 2.5) / 0.5);
}

}  // namespace
}  // namespace dcfeas
