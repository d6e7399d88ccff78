#include "dcfeas/esqm.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "dcfeas/errors.hpp"
#include "dcfeas/initializer.hpp"
#include "test_util.hpp"

namespace dcfeas {
namespace {

TEST(ExactPenalty, FeasiblePointHasNoPenalty) {
  const ProblemInstance inst = testing::small_ball_instance(16, 64, 1);
  const Vector& x = inst.slater_point;
  EXPECT_DOUBLE_EQ(exact_penalty_value(inst, 0.5, x), inst.objective.eval(x));
}

TEST(ExactPenalty, LinearInInversePenaltyByHand) {
  // g(x) = ||x - b||^2 - sigma^2 with a = I: at x = 0, g = 4 - 1 = 3.
  const ProblemInstance inst = make_convex_ball_instance(
      DenseMatrix::identity(2), Vector{2.0, 0.0}, GroupStructure::singletons(2), 0.5, 1.0, 10.0,
      Vector{2.0, 0.0}, std::nullopt);
  const Vector x{0.0, 0.0};
  EXPECT_DOUBLE_EQ(exact_penalty_value(inst, 0.5, x), inst.objective.eval(x) + 6.0);
  EXPECT_LT(exact_penalty_value(inst, 1.0, x), exact_penalty_value(inst, 0.25, x));
  EXPECT_THROW(exact_penalty_value(inst, 0.0, x), Error);
}

TEST(EsqmSolve, CriticalStartExitsImmediately) {
  const ProblemInstance inst = make_convex_ball_instance(
      DenseMatrix::identity(4), Vector{1.0, 0.0, 0.0, 0.0}, GroupStructure::contiguous(4, 2), 0.5,
      10.0, 5.0, Vector{1.0, 0.0, 0.0, 0.0}, std::nullopt);
  const RunReport rep = esqm_solve(inst, Vector(4, 0.0));
  EXPECT_LE(rep.iterations, 2u);
  EXPECT_EQ(rep.termination, Termination::kCriticality);
}

TEST(EsqmSolve, ArmijoInequalityHoldsAndPenaltyGrowsOnlyWhenViolated) {
  const ProblemInstance inst = testing::small_ball_instance(40, 160, 3, 0.9);
  ESQMConfig cfg;
  cfg.log_history = true;
  const RunReport rep = esqm_solve(inst, init_e3(inst), cfg);
  ASSERT_FALSE(rep.history.empty());
  for (std::size_t i = 0; i < rep.history.size(); ++i) {
    const IterationRecord& r = rep.history[i];
    EXPECT_LE(r.penalty_next,
              r.penalty - cfg.c * r.t_step * r.beta_inv * r.step_norm * r.step_norm);
    if (i + 1 < rep.history.size()) {
      const double next = rep.history[i + 1].beta_inv;
      EXPECT_DOUBLE_EQ(next, r.violated ? r.beta_inv + cfg.delta : r.beta_inv);
    }
  }
  EXPECT_EQ(rep.termination, Termination::kCriticality);
  EXPECT_LE(std::abs(eval_residual(inst, rep.final_x)), 1e-8);
}

TEST(EsqmSolve, MatchesFpaRecoveryOnASmallInstance) {
  const ProblemInstance inst = testing::small_ball_instance(40, 160, 5, 0.9);
  const Vector x0 = init_e3(inst);
  const RunReport e = esqm_solve(inst, x0);
  const RunReport f = fpa_solve(inst, x0);
  EXPECT_NEAR(recovery_error(inst, e.final_x), recovery_error(inst, f.final_x), 5e-3);
}

TEST(EsqmSolve, RejectsStartsOutsideTheBox) {
  const ProblemInstance inst = testing::small_ball_instance(16, 64, 7);
  Vector x(64, 0.0);
  x[0] = 10.0 * inst.set.radius;
  EXPECT_THROW(esqm_solve(inst, x), Error);
}

}  // namespace
}  // namespace dcfeas
