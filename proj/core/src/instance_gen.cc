#include "dcfeas/instance_gen.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "dcfeas/errors.hpp"

namespace dcfeas {

namespace {

constexpr int kMaxAttempts = 20;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DenseMatrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = rng.gaussian();
  return m;
}

struct AnchorData {
  Vector slater;
  double cpu_qr = 0.0;
  double cpu_slater = 0.0;
};

AnchorData least_norm_anchor(const DenseMatrix& a, const Vector& b) {
  AnchorData out;
  auto t0 = std::chrono::steady_clock::now();
  const QRFactorization qr = householder_qr(a.transpose());
  out.cpu_qr = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  out.slater = least_norm_from_qr(qr, b);
  out.cpu_slater = seconds_since(t0);
  return out;
}

void fill_meta(ProblemInstance& inst, const GenSpec& spec, const AnchorData& anchor) {
  inst.meta.kind = to_string(spec.kind);
  inst.meta.p = spec.p;
  inst.meta.n = spec.n;
  inst.meta.k = spec.k;
  inst.meta.seed = spec.seed;
  inst.meta.cpu_qr = anchor.cpu_qr;
  inst.meta.cpu_slater = anchor.cpu_slater;
}

void check_common(const GenSpec& spec) {
  if (spec.p == 0 || spec.n == 0 || spec.k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "generator: p, n and k must be positive");
  }
  if (spec.p > spec.n) throw Error(ErrorCode::kInvalidArgument, "generator: need p <= n");
  if (!(spec.mu >= 0.0 && spec.mu < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "generator: mu must lie in [0, 1)");
  }
  if (!(spec.noise_scale > 0.0 && spec.sigma_factor > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "generator: noise scale and sigma factor must be > 0");
  }
}

}  // namespace

const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kE3: return "e3";
    case ProblemKind::kE4: return "e4";
  }
  return "unknown";
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

double Rng::cauchy() { return std::tan(std::numbers::pi * (uniform() - 0.5)); }

std::size_t Rng::below(std::size_t n) {
  const auto v = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return v < n ? v : n - 1;
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[below(i)]);
  return perm;
}

void normalize_columns(DenseMatrix& m) {
  Vector norms(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) norms[j] += row[j] * row[j];
  }
  for (double& v : norms) v = std::sqrt(v);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (norms[j] > 0.0) row[j] /= norms[j];
    }
  }
}

ProblemInstance generate_e3(const GenSpec& spec) {
  if (spec.kind != ProblemKind::kE3) throw Error(ErrorCode::kInvalidArgument, "generate_e3: kind");
  check_common(spec);
  const std::size_t j = spec.block_size;
  if (j == 0 || spec.n % j != 0) {
    throw Error(ErrorCode::kInvalidArgument, "generate_e3: n must be a multiple of the block size");
  }
  const std::size_t blocks = spec.n / j;
  if (spec.k > blocks) throw Error(ErrorCode::kInvalidArgument, "generate_e3: k exceeds block count");

  Rng rng(spec.seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    DenseMatrix a = gaussian_matrix(rng, spec.p, spec.n);
    normalize_columns(a);

    // Blocks are the columns of a j x (n/j) array stored column-major; all
    // but k randomly chosen blocks are zeroed.
    const std::vector<std::size_t> perm = rng.permutation(blocks);
    Vector x_orig(spec.n);
    for (double& v : x_orig) v = rng.gaussian();
    for (std::size_t idx = spec.k; idx < blocks; ++idx) {
      const std::size_t blk = perm[idx];
      for (std::size_t r = 0; r < j; ++r) x_orig[blk * j + r] = 0.0;
    }

    Vector noise(spec.p);
    for (double& v : noise) v = spec.noise_scale * rng.gaussian();
    Vector b = matvec(a, x_orig);
    axpy(1.0, noise, b);
    const double sigma = spec.sigma_factor * norm2(noise);
    if (!(sigma < norm2(b))) continue;

    AnchorData anchor = least_norm_anchor(a, b);
    GroupStructure groups = GroupStructure::contiguous(spec.n, j);
    const double radius = box_radius_from_anchor(groups, spec.mu, anchor.slater);
    Vector slater = anchor.slater;
    ProblemInstance inst = make_convex_ball_instance(std::move(a), std::move(b), std::move(groups),
                                                     spec.mu, sigma, radius, std::move(slater),
                                                     std::move(x_orig));
    fill_meta(inst, spec, anchor);
    return inst;
  }
  throw Error(ErrorCode::kInvalidArgument, "generate_e3: could not draw sigma < ||b||");
}

ProblemInstance generate_e4(const GenSpec& spec) {
  if (spec.kind != ProblemKind::kE4) throw Error(ErrorCode::kInvalidArgument, "generate_e4: kind");
  check_common(spec);
  if (spec.k > spec.n) throw Error(ErrorCode::kInvalidArgument, "generate_e4: k exceeds n");
  if (!(spec.gamma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "generate_e4: gamma <= 0");
  const std::size_t p = spec.p, n = spec.n;
  const PhiFunction phi = PhiFunction::log_lorentzian(spec.gamma);

  Rng rng(spec.seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const DenseMatrix a_re = gaussian_matrix(rng, p, n);
    const DenseMatrix a_im = gaussian_matrix(rng, p, n);
    DenseMatrix a(2 * p, 2 * n);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t c = 0; c < n; ++c) {
        a(i, c) = a_re(i, c);
        a(i, c + n) = -a_im(i, c);
        a(i + p, c) = a_im(i, c);
        a(i + p, c + n) = a_re(i, c);
      }
    }
    normalize_columns(a);

    const std::vector<std::size_t> perm = rng.permutation(n);
    Vector u(spec.k), v(spec.k);
    for (double& x : u) x = rng.gaussian();
    for (double& x : v) x = rng.gaussian();
    Vector x_orig(2 * n, 0.0);
    for (std::size_t t = 0; t < spec.k; ++t) {
      x_orig[perm[t]] = u[t];
      x_orig[perm[t] + n] = v[t];
    }

    Vector noise(2 * p);
    for (double& x : noise) x = spec.noise_scale * rng.cauchy();
    Vector b = matvec(a, x_orig);
    axpy(1.0, noise, b);
    const double sigma = spec.sigma_factor * ell_eval(phi, noise);
    if (!(sigma > 0.0 && sigma < ell_eval(phi, b))) continue;

    AnchorData anchor = least_norm_anchor(a, b);
    GroupStructure groups = GroupStructure::complex_pairs(n);
    const double radius = box_radius_from_anchor(groups, spec.mu, anchor.slater);
    Vector slater = anchor.slater;
    ProblemInstance inst = make_lorentzian_instance(std::move(a), std::move(b), std::move(groups),
                                                    spec.mu, phi, sigma, radius, std::move(slater),
                                                    std::move(x_orig));
    fill_meta(inst, spec, anchor);
    return inst;
  }
  throw Error(ErrorCode::kInvalidArgument, "generate_e4: could not draw sigma < ell(b)");
}

ProblemInstance generate(const GenSpec& spec) {
  return spec.kind == ProblemKind::kE3 ? generate_e3(spec) : generate_e4(spec);
}

}  // namespace dcfeas
