#pragma once

// Warm starts for the two models: a loose convex pre-solve (mu = 0) with
// the repo's own driver, followed by a pull-back toward the least-norm
// anchor that makes the point feasible.

#include <span>
#include <string>

#include "dcfeas/fpa_convex.hpp"
#include "dcfeas/problem.hpp"

namespace dcfeas {

// The least-squares pre-solve needs a long run for a start that is near the
// solution; the loss pre-solve works on a majorant and a short run suffices.
struct InitOptions {
  double tol = 1e-3;
  int max_iter_e3 = 3000;
  int max_iter_e4 = 300;
};

/// Label stored in RunReport::initializer for points produced here.
inline constexpr const char* kConvexWarmStart = "convex_warm_start";
inline constexpr const char* kAnchorFallback = "anchor_fallback";

/// If ||a x - b|| > sigma, returns x + tau (slater - x) with tau the positive
/// root of ||a (x + tau (slater - x)) - b||^2 = sigma^2; otherwise x.
Vector pull_back_least_squares(const ProblemInstance& inst, std::span<const double> x);

/// Root in [0, 1] of s -> ell(sqrt(s) v) - sigma by Newton's method from
/// s = 0. The map is concave and increasing, so the iterates increase
/// monotonically and stay on the feasible side. Returns 1 when ell(v) <= sigma.
double loss_scale_root(const PhiFunction& phi, std::span<const double> v, double sigma);

/// If ell(a x - b) > sigma, returns x + tau1 (slater - x) with
/// tau1 = 1 - sqrt(s*) and s* = loss_scale_root(phi, b - a x, sigma); otherwise x.
Vector pull_back_loss(const ProblemInstance& inst, std::span<const double> x);

/// Always returns a point that is feasible and inside C. `label`, if given,
/// receives which path produced it.
Vector init_e3(const ProblemInstance& inst, const InitOptions& opts = {},
               std::string* label = nullptr);
Vector init_e4(const ProblemInstance& inst, const InitOptions& opts = {},
               std::string* label = nullptr);

}  // namespace dcfeas
