#pragma once

// Seeded random instances of the two compressed-sensing models: group-sparse
// recovery under Gaussian noise with a least-squares ball constraint, and
// complex sparse recovery under Cauchy noise with a Lorentzian constraint.

#include <cstddef>
#include <cstdint>
#include <random>

#include "dcfeas/problem.hpp"

namespace dcfeas {

enum class ProblemKind { kE3, kE4 };

const char* to_string(ProblemKind kind);

struct GenSpec {
  ProblemKind kind = ProblemKind::kE3;
  // For e4, p and n are the complex dimensions; the real matrix is 2p x 2n.
  std::size_t p = 0, n = 0, k = 0;
  std::size_t block_size = 2;  // j, e3 only
  double mu = 0.95;
  double gamma = 0.05;         // e4 only
  double noise_scale = 0.005;
  double sigma_factor = 1.2;
  std::uint64_t seed = 1;
};

/// Deterministic stream: mt19937_64 with 53-bit uniforms and Box-Muller
/// Gaussians, so equal seeds give bit-identical draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  double gaussian();
  /// tan(pi (u - 1/2)) with u uniform.
  double cauchy();
  /// Uniform on {0, ..., n - 1}.
  std::size_t below(std::size_t n);
  /// Uniformly random permutation of {0, ..., n - 1} (Fisher-Yates).
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

ProblemInstance generate_e3(const GenSpec& spec);
ProblemInstance generate_e4(const GenSpec& spec);
ProblemInstance generate(const GenSpec& spec);

/// Scales every column of m to unit Euclidean norm (zero columns are left alone).
void normalize_columns(DenseMatrix& m);

}  // namespace dcfeas
