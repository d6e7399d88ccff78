#pragma once

// Concave-composite losses ell(u) = sum_i phi(u_i^2) and their convex
// quadratic majorants ell^y(u) = sum_i omega_i^y u_i^2.

#include <span>

#include "dcfeas/linalg.hpp"

namespace dcfeas {

/// phi : [0, inf) -> [0, inf), concave, nondecreasing, phi(0) = 0.
class PhiFunction {
 public:
  enum class Kind { kLogLorentzian, kRational };

  PhiFunction() = default;

  /// phi(t) = log(1 + t / gamma^2); ell is then the Lorentzian norm.
  static PhiFunction log_lorentzian(double gamma);
  /// phi(t) = (a + 1) t / (a + t)
  static PhiFunction rational(double a);

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }

  double eval(double t) const;
  /// phi'_+(t); at t = 0 the analytic limit vartheta is returned.
  double right_derivative(double t) const;
  /// vartheta = lim_{t -> 0+} phi'(t)
  double vartheta() const;

 private:
  PhiFunction(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_ = Kind::kLogLorentzian;
  double param_ = 1.0;
};

double ell_eval(const PhiFunction& phi, std::span<const double> u);

/// (2 phi'_+(u_i^2) u_i)_i
Vector ell_grad(const PhiFunction& phi, std::span<const double> u);

struct MajorizationData {
  Vector omega;          // omega_i^y, all in [0, vartheta]
  double sigma_tilde = 0.0;
  Vector anchor;         // y
  Vector anchor_residual;  // a y - b
};

/// omega_i = phi'_+((a_i^T y - b_i)^2),
/// sigma_tilde = sigma - ell(a y - b) + sum_i omega_i (a_i^T y - b_i)^2.
MajorizationData build_majorization(const PhiFunction& phi, const DenseMatrix& a,
                                    std::span<const double> b, double sigma,
                                    std::span<const double> y);

/// Same as build_majorization when a y - b is already known.
MajorizationData build_majorization_from_residual(const PhiFunction& phi,
                                                  std::span<const double> anchor_residual,
                                                  double sigma, std::span<const double> y);

/// ell^y(u) = sum_i omega_i u_i^2
double ell_y_eval(const MajorizationData& m, std::span<const double> u);

/// (2 omega_i u_i)_i
Vector ell_y_grad(const MajorizationData& m, std::span<const double> u);

/// L_ell = 2 vartheta, a gradient Lipschitz modulus of every ell^y.
double lipschitz_ell(const PhiFunction& phi);

}  // namespace dcfeas
