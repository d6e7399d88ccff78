#include "dcfeas/initializer.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "dcfeas/errors.hpp"
#include "test_util.hpp"

namespace dcfeas {
namespace {

// a = I (2x2), b = (4, 0), sigma = 1, anchor = b. A point with residual
// colinear to the anchor direction has a closed-form pull-back.
ProblemInstance identity_ball() {
  return make_convex_ball_instance(DenseMatrix::identity(2), Vector{4.0, 0.0},
                                   GroupStructure::singletons(2), 0.5, 1.0, 100.0,
                                   Vector{4.0, 0.0}, std::nullopt);
}

TEST(PullBackLeastSquares, FeasiblePointIsUnchanged) {
  const ProblemInstance inst = identity_ball();
  const Vector x{3.5, 0.2};
  EXPECT_EQ(pull_back_least_squares(inst, x), x);
}

TEST(PullBackLeastSquares, TwiceTheRadiusGivesHalfStep) {
  const ProblemInstance inst = identity_ball();
  // ||x - b|| = 2 sigma, so (1 - tau)^2 (2 sigma)^2 = sigma^2 and tau = 1/2.
  const Vector y = pull_back_least_squares(inst, Vector{2.0, 0.0});
  EXPECT_NEAR(y[0], 3.0, 1e-12);
  EXPECT_NEAR(y[1], 0.0, 1e-15);
  EXPECT_LE(inst.constraints.front().eval(y), 0.0);
}

TEST(LossScaleRoot, BoundaryCaseReturnsOne) {
  const PhiFunction phi = PhiFunction::log_lorentzian(0.05);
  const Vector v{0.3, -0.2, 0.1};
  EXPECT_EQ(loss_scale_root(phi, v, ell_eval(phi, v)), 1.0);
}

TEST(LossScaleRoot, RootIsUniqueAndBracketed) {
  const PhiFunction phi = PhiFunction::log_lorentzian(0.05);
  std::mt19937_64 gen(109);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector v = testing::random_vector(10, gen);
    const double sigma = 0.3 * ell_eval(phi, v);
    auto h = [&](double s) {
      Vector w = v;
      for (double& x : w) x *= std::sqrt(s);
      return ell_eval(phi, w) - sigma;
    };
    ASSERT_LT(h(0.0), 0.0);
    ASSERT_GT(h(1.0), 0.0);
    // Strictly increasing on a grid.
    double prev = h(0.0);
    for (int i = 1; i <= 20; ++i) {
      const double cur = h(i / 20.0);
      EXPECT_GT(cur, prev);
      prev = cur;
    }
    const double s = loss_scale_root(phi, v, sigma);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(h(s), 0.0, 1e-10 * sigma);
    // h here scales v by sqrt(s), so it differs from the solver's own
    // evaluation by rounding.
    EXPECT_LE(h(s), 1e-13 * sigma);
  }
}

TEST(PullBackLoss, FeasiblePointIsUnchangedAndInfeasibleIsRepaired) {
  const ProblemInstance inst = testing::small_loss_instance(10, 40, 3);
  EXPECT_EQ(pull_back_loss(inst, inst.slater_point), inst.slater_point);
  const Vector zero(inst.dimension(), 0.0);
  ASSERT_GT(inst.constraints.front().eval(zero), 0.0);
  const Vector y = pull_back_loss(inst, zero);
  EXPECT_LE(inst.constraints.front().eval(y), 0.0);
  EXPECT_GE(inst.constraints.front().eval(y), -1e-8 * inst.sigma);
}

TEST(InitE3, OutputIsFeasibleAndInTheBox) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ProblemInstance inst = testing::small_ball_instance(30, 120, seed, 0.9);
    std::string label;
    const Vector x = init_e3(inst, {}, &label);
    EXPECT_TRUE(inst.set.contains(x));
    EXPECT_LE(norm2(residual(*inst.a, x, *inst.b)), inst.sigma);
    EXPECT_EQ(label, kConvexWarmStart);
  }
}

TEST(InitE3, InnerFailureFallsBackToTheAnchor) {
  const ProblemInstance inst = testing::small_ball_instance(30, 120, 1, 0.9);
  InitOptions opts;
  opts.max_iter_e3 = 0;  // pre-solve returns its start, the anchor itself
  std::string label;
  const Vector x = init_e3(inst, opts, &label);
  EXPECT_TRUE(inst.set.contains(x));
  EXPECT_LE(inst.constraints.front().eval(x), 0.0);
}

TEST(InitE4, OutputIsFeasibleAndInTheBox) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ProblemInstance inst = testing::small_loss_instance(15, 60, seed, 0.9);
    std::string label;
    const Vector x = init_e4(inst, {}, &label);
    EXPECT_TRUE(inst.set.contains(x));
    EXPECT_LE(inst.constraints.front().eval(x), 0.0);
    EXPECT_FALSE(label.empty());
  }
}

TEST(Initializers, RejectTheWrongModel) {
  EXPECT_THROW(init_e3(testing::small_loss_instance(8, 32, 1)), Error);
  EXPECT_THROW(init_e4(testing::small_ball_instance(8, 32, 1)), Error);
}

}  // namespace
}  // namespace dcfeas
