#include "dcfeas/lorentzian.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "dcfeas/errors.hpp"

namespace dcfeas {

PhiFunction PhiFunction::log_lorentzian(double gamma) {
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "log_lorentzian: gamma must be positive");
  }
  return PhiFunction(Kind::kLogLorentzian, gamma);
}

PhiFunction PhiFunction::rational(double a) {
  if (!(a > 0.0)) throw Error(ErrorCode::kInvalidArgument, "rational phi: a must be positive");
  return PhiFunction(Kind::kRational, a);
}

double PhiFunction::eval(double t) const {
  switch (kind_) {
    case Kind::kLogLorentzian:
      return std::log1p(t / (param_ * param_));
    case Kind::kRational:
      return (param_ + 1.0) * t / (param_ + t);
  }
  return 0.0;
}

double PhiFunction::right_derivative(double t) const {
  if (t <= 0.0) return vartheta();
  switch (kind_) {
    case Kind::kLogLorentzian:
      return 1.0 / (param_ * param_ + t);
    case Kind::kRational: {
      const double d = param_ + t;
      return param_ * (param_ + 1.0) / (d * d);
    }
  }
  return 0.0;
}

double PhiFunction::vartheta() const {
  switch (kind_) {
    case Kind::kLogLorentzian:
      return 1.0 / (param_ * param_);
    case Kind::kRational:
      return (param_ + 1.0) / param_;
  }
  return 0.0;
}

double ell_eval(const PhiFunction& phi, std::span<const double> u) {
  double s = 0.0;
  for (double v : u) s += phi.eval(v * v);
  return s;
}

Vector ell_grad(const PhiFunction& phi, std::span<const double> u) {
  Vector g(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) g[i] = 2.0 * phi.right_derivative(u[i] * u[i]) * u[i];
  return g;
}

MajorizationData build_majorization_from_residual(const PhiFunction& phi,
                                                  std::span<const double> anchor_residual,
                                                  double sigma, std::span<const double> y) {
  MajorizationData m;
  m.omega.resize(anchor_residual.size());
  double loss = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < anchor_residual.size(); ++i) {
    const double r2 = anchor_residual[i] * anchor_residual[i];
    m.omega[i] = phi.right_derivative(r2);
    loss += phi.eval(r2);
    weighted += m.omega[i] * r2;
  }
  m.sigma_tilde = sigma - loss + weighted;
  m.anchor.assign(y.begin(), y.end());
  m.anchor_residual.assign(anchor_residual.begin(), anchor_residual.end());
  return m;
}

MajorizationData build_majorization(const PhiFunction& phi, const DenseMatrix& a,
                                    std::span<const double> b, double sigma,
                                    std::span<const double> y) {
  const Vector r = residual(a, y, b);
  return build_majorization_from_residual(phi, r, sigma, y);
}

double ell_y_eval(const MajorizationData& m, std::span<const double> u) {
  if (u.size() != m.omega.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "ell_y_eval: dimension " + std::to_string(u.size()) + " != " +
                    std::to_string(m.omega.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += m.omega[i] * u[i] * u[i];
  return s;
}

Vector ell_y_grad(const MajorizationData& m, std::span<const double> u) {
  assert(u.size() == m.omega.size());
  Vector g(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) g[i] = 2.0 * m.omega[i] * u[i];
  return g;
}

double lipschitz_ell(const PhiFunction& phi) { return 2.0 * phi.vartheta(); }

}  // namespace dcfeas
