#include "dcfeas/fpa_nonconvex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dcfeas/errors.hpp"
#include "fpa_driver.hpp"

namespace dcfeas {

namespace {

RetractionResult retract_from_residual(std::span<const double> u_tilde,
                                       std::span<const double> d,
                                       std::span<const double> slater,
                                       const MajorizationData& m, const DenseMatrix& a_mat,
                                       std::span<const double> b) {
  if (!(m.sigma_tilde > 0.0)) {
    throw Error(ErrorCode::kRetractionFailed,
                "retract_quadratic: sigma_tilde <= 0, the anchor iterate is infeasible");
  }
  RetractionResult out;
  const double q = ell_y_eval(m, d);
  out.g_u = q - m.sigma_tilde;
  if (q <= m.sigma_tilde) {
    out.x_tilde.assign(u_tilde.begin(), u_tilde.end());
    return out;
  }
  double tau = 1.0 - std::sqrt(m.sigma_tilde / q);
  double bump = 4.0 * std::numeric_limits<double>::epsilon();
  for (int attempt = 0; attempt < 200; ++attempt) {
    out.x_tilde = tau >= 1.0 ? Vector(slater.begin(), slater.end()) : lerp(u_tilde, slater, tau);
    if (tau >= 1.0 || ell_y_eval(m, residual(a_mat, out.x_tilde, b)) <= m.sigma_tilde) break;
    tau = std::min(1.0, tau + bump * tau);
    bump *= 16.0;
  }
  out.tau = tau;
  return out;
}

}  // namespace

RetractionResult retract_quadratic(std::span<const double> u_tilde,
                                   std::span<const double> slater, const MajorizationData& m,
                                   const DenseMatrix& a_mat, std::span<const double> b) {
  if (u_tilde.size() != a_mat.cols() || slater.size() != a_mat.cols() || b.size() != a_mat.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "retract_quadratic: dimension mismatch");
  }
  const Vector d = residual(a_mat, u_tilde, b);
  return retract_from_residual(u_tilde, d, slater, m, a_mat, b);
}

RunReport fpa_nonconvex_solve(const ProblemInstance& inst, std::span<const double> x0,
                              const FPAConfig& cfg) {
  if (inst.constraint_kind != ConstraintKind::kLorentzian) {
    throw Error(ErrorCode::kUnsupported, "fpa_nonconvex_solve: needs a loss-type constraint");
  }
  const DenseMatrix& a = *inst.a;
  const Vector& b = *inst.b;
  const Vector& slater = inst.slater_point;
  const double lip = lipschitz_ell(inst.phi) * inst.a_norm * inst.a_norm;
  auto factory = [&](const Vector& x) -> detail::RetractFn {
    auto m = std::make_shared<const MajorizationData>(
        build_majorization(inst.phi, a, b, inst.sigma, x));
    return [&, m, x](const Vector& u) {
      const Vector d = residual(a, u, b);
      detail::TrialRetraction t;
      t.result = retract_from_residual(u, d, slater, *m, a, b);
      t.result.g_u = ell_eval(inst.phi, d) - inst.sigma;
      const double step = norm2(subtract(u, x));
      t.tau_bound = lip * step * step / (2.0 * m->sigma_tilde);
      return t;
    };
  };
  return detail::run_fpa(inst, x0, cfg, factory);
}

}  // namespace dcfeas
