#include "dcfeas/lorentzian.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "dcfeas/errors.hpp"
#include "test_util.hpp"

namespace dcfeas {
namespace {

using testing::random_matrix;
using testing::random_vector;

Vector central_difference(const std::function<double(const Vector&)>& f, Vector x) {
  Vector g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

TEST(Phi, RejectsNonPositiveParameters) {
  EXPECT_THROW(PhiFunction::log_lorentzian(0.0), Error);
  EXPECT_THROW(PhiFunction::rational(-1.0), Error);
}

TEST(EllEval, HandValues) {
  const PhiFunction log1 = PhiFunction::log_lorentzian(1.0);
  EXPECT_EQ(ell_eval(log1, Vector{0.0, 0.0}), 0.0);
  EXPECT_NEAR(ell_eval(log1, Vector{1.0}), std::log(2.0), 1e-15);
  EXPECT_NEAR(ell_eval(PhiFunction::rational(1.0), Vector{1.0}), 1.0, 1e-15);
}

TEST(EllGrad, HandValues) {
  const PhiFunction log1 = PhiFunction::log_lorentzian(1.0);
  EXPECT_EQ(ell_grad(log1, Vector{0.0})[0], 0.0);
  EXPECT_NEAR(ell_grad(log1, Vector{1.0})[0], 1.0, 1e-15);
}

TEST(EllGrad, MatchesCentralDifferences) {
  std::mt19937_64 gen(43);
  for (const PhiFunction& phi : {PhiFunction::log_lorentzian(0.3), PhiFunction::rational(2.0)}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Vector u = random_vector(6, gen);
      const Vector g = ell_grad(phi, u);
      const Vector fd = central_difference([&](const Vector& v) { return ell_eval(phi, v); }, u);
      EXPECT_LE(norm2(subtract(g, fd)), 1e-6 * std::max(1.0, norm2(g)));
    }
  }
}

TEST(Majorization, InterpolatingAnchorGivesFlatWeights) {
  const DenseMatrix a = DenseMatrix::from_rows({{1.0, 0.0}, {0.0, 2.0}});
  const Vector b{1.0, 2.0};
  const PhiFunction phi = PhiFunction::log_lorentzian(0.5);
  const MajorizationData m = build_majorization(phi, a, b, 0.7, Vector{1.0, 1.0});
  for (double w : m.omega) EXPECT_DOUBLE_EQ(w, phi.vartheta());
  EXPECT_DOUBLE_EQ(m.sigma_tilde, 0.7);
}

TEST(Majorization, SingleRowByHand) {
  const DenseMatrix a = DenseMatrix::from_rows({{1.0}});
  const MajorizationData m =
      build_majorization(PhiFunction::log_lorentzian(1.0), a, Vector{0.0}, 2.0, Vector{1.0});
  EXPECT_NEAR(m.omega[0], 0.5, 1e-15);
  EXPECT_NEAR(m.sigma_tilde, 2.0 - std::log(2.0) + 0.5, 1e-15);
}

TEST(Majorization, UpperModelTangencyAndPositiveRadius) {
  std::mt19937_64 gen(47);
  const PhiFunction phi = PhiFunction::log_lorentzian(0.05);
  const DenseMatrix a = random_matrix(8, 12, gen);
  const Vector b = random_vector(8, gen);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector y = random_vector(12, gen, 0.1);
    const Vector ry = residual(a, y, b);
    const double sigma = ell_eval(phi, ry) * 1.01 + 1e-3;  // y is feasible
    const MajorizationData m = build_majorization(phi, a, b, sigma, y);
    EXPECT_GT(m.sigma_tilde, 0.0);
    EXPECT_NEAR(ell_y_eval(m, ry) - m.sigma_tilde, ell_eval(phi, ry) - sigma, 1e-10);
    const Vector g1 = ell_grad(phi, ry);
    const Vector g2 = ell_y_grad(m, ry);
    EXPECT_LE(norm2(subtract(g1, g2)), 1e-10 * std::max(1.0, norm2(g1)));
    const Vector u = random_vector(8, gen);
    EXPECT_LE(ell_eval(phi, u) - sigma, ell_y_eval(m, u) - m.sigma_tilde + 1e-10);
  }
}

TEST(EllY, HandValueAndConvexity) {
  MajorizationData m;
  m.omega = {2.0, 3.0};
  EXPECT_EQ(ell_y_eval(m, Vector{0.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(ell_y_eval(m, Vector{1.0, 1.0}), 5.0);
  std::mt19937_64 gen(53);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector u = random_vector(2, gen);
    const Vector v = random_vector(2, gen);
    EXPECT_LE(ell_y_eval(m, lerp(u, v, 0.5)),
              0.5 * (ell_y_eval(m, u) + ell_y_eval(m, v)) + 1e-12);
  }
  EXPECT_THROW(ell_y_eval(m, Vector{1.0}), Error);
}

TEST(EllY, GradientMatchesCentralDifferences) {
  std::mt19937_64 gen(59);
  const PhiFunction phi = PhiFunction::log_lorentzian(0.2);
  const MajorizationData m =
      build_majorization_from_residual(phi, random_vector(5, gen), 3.0, Vector(5, 0.0));
  for (int trial = 0; trial < 50; ++trial) {
    const Vector u = random_vector(5, gen);
    const Vector fd = central_difference([&](const Vector& v) { return ell_y_eval(m, v); }, u);
    const Vector g = ell_y_grad(m, u);
    EXPECT_LE(norm2(subtract(g, fd)), 1e-6 * std::max(1.0, norm2(g)));
  }
}

TEST(Lipschitz, ClosedForms) {
  EXPECT_DOUBLE_EQ(lipschitz_ell(PhiFunction::log_lorentzian(0.5)), 2.0 / 0.25);
  EXPECT_DOUBLE_EQ(lipschitz_ell(PhiFunction::rational(3.0)), 2.0 * 4.0 / 3.0);
  EXPECT_NEAR(lipschitz_ell(PhiFunction::log_lorentzian(0.05)), 800.0, 1e-9);
}

TEST(Lipschitz, GradientDifferenceBound) {
  std::mt19937_64 gen(61);
  const PhiFunction phi = PhiFunction::log_lorentzian(0.05);
  const double lip = lipschitz_ell(phi);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector u = random_vector(4, gen, 0.1);
    const Vector v = random_vector(4, gen, 0.1);
    const double lhs = norm2(subtract(ell_grad(phi, u), ell_grad(phi, v)));
    EXPECT_LE(lhs, lip * norm2(subtract(u, v)) * (1.0 + 1e-8));
  }
}

}  // namespace
}  // namespace dcfeas
