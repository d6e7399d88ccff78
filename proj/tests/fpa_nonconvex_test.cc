#include "dcfeas/fpa_nonconvex.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "dcfeas/errors.hpp"
#include "dcfeas/initializer.hpp"
#include "test_util.hpp"

namespace dcfeas {
namespace {

TEST(RetractQuadratic, QuarterLevelGivesHalfStep) {
  // a = I, b = 0, anchor 0: d = u and ell^y(d) = sum omega u^2.
  const DenseMatrix a = DenseMatrix::identity(2);
  const Vector b{0.0, 0.0};
  MajorizationData m;
  m.omega = {1.0, 1.0};
  m.sigma_tilde = 1.0;
  const RetractionResult r = retract_quadratic(Vector{2.0, 0.0}, Vector{0.0, 0.0}, m, a, b);
  EXPECT_NEAR(r.tau, 0.5, 1e-15);
  EXPECT_NEAR(r.x_tilde[0], 1.0, 1e-15);
  EXPECT_LE(ell_y_eval(m, r.x_tilde), m.sigma_tilde);
}

TEST(RetractQuadratic, BoundaryPointIsUntouched) {
  const DenseMatrix a = DenseMatrix::identity(1);
  MajorizationData m;
  m.omega = {1.0};
  m.sigma_tilde = 4.0;
  const RetractionResult r = retract_quadratic(Vector{2.0}, Vector{0.0}, m, a, Vector{0.0});
  EXPECT_EQ(r.tau, 0.0);
  EXPECT_EQ(r.x_tilde, Vector{2.0});
}

TEST(RetractQuadratic, NonPositiveRadiusIsAnError) {
  const DenseMatrix a = DenseMatrix::identity(1);
  MajorizationData m;
  m.omega = {1.0};
  m.sigma_tilde = 0.0;
  EXPECT_THROW(retract_quadratic(Vector{2.0}, Vector{0.0}, m, a, Vector{0.0}), Error);
}

TEST(RetractQuadratic, ResultSatisfiesTheTrueLoss) {
  const ProblemInstance inst = testing::small_loss_instance(16, 64, 3);
  std::mt19937_64 gen(107);
  const Vector& y = inst.slater_point;
  const MajorizationData m = build_majorization(inst.phi, *inst.a, *inst.b, inst.sigma, y);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector u = testing::random_vector(inst.dimension(), gen);
    const RetractionResult r = retract_quadratic(u, inst.slater_point, m, *inst.a, *inst.b);
    EXPECT_LE(inst.constraints.front().eval(r.x_tilde), 0.0);
  }
}

TEST(FpaNonconvex, AnchorIsAValidStart) {
  const ProblemInstance inst = testing::small_loss_instance(16, 64, 5);
  FPAConfig cfg;
  cfg.max_iter = 5;
  EXPECT_NO_THROW(fpa_nonconvex_solve(inst, inst.slater_point, cfg));
}

TEST(FpaNonconvex, IteratesStayFeasibleAndDescend) {
  const ProblemInstance inst = testing::small_loss_instance(40, 160, 7, 0.9);
  FPAConfig cfg;
  cfg.log_history = true;
  const RunReport rep = fpa_nonconvex_solve(inst, init_e4(inst), cfg);
  ASSERT_FALSE(rep.history.empty());
  for (const IterationRecord& r : rep.history) {
    EXPECT_LE(r.slack_next, 1e-10);
    EXPECT_TRUE(r.in_box_next);
    EXPECT_LE(r.obj_next, r.obj - 0.5 * cfg.c * r.step_norm * r.step_norm);
  }
  EXPECT_EQ(rep.tau_bound_violations, 0u);
  EXPECT_LE(std::abs(eval_residual(inst, rep.final_x)), 1e-8);
}

TEST(FpaNonconvex, RejectsBallInstances) {
  const ProblemInstance inst = testing::small_ball_instance(16, 64, 1);
  EXPECT_THROW(fpa_nonconvex_solve(inst, inst.slater_point), Error);
}

}  // namespace
}  // namespace dcfeas
