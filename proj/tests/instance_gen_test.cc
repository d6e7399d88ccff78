#include "dcfeas/instance_gen.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dcfeas/errors.hpp"

namespace dcfeas {
namespace {

GenSpec e3_spec(std::uint64_t seed) {
  GenSpec s;
  s.kind = ProblemKind::kE3;
  s.p = 30;
  s.n = 120;
  s.k = 6;
  s.seed = seed;
  return s;
}

GenSpec e4_spec(std::uint64_t seed) {
  GenSpec s;
  s.kind = ProblemKind::kE4;
  s.p = 15;
  s.n = 60;
  s.k = 4;
  s.seed = seed;
  return s;
}

std::vector<double> column_norms(const DenseMatrix& a) {
  std::vector<double> out(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += a(i, j) * a(i, j);
  }
  for (double& v : out) v = std::sqrt(v);
  return out;
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.gaussian();
    EXPECT_EQ(x, b.gaussian());
    differs = differs || x != c.gaussian();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformRange) {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, GaussianMeanAndVariance) {
  Rng rng(7);
  constexpr int kSamples = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / kSamples;
  EXPECT_LT(std::abs(mean), 0.01);
  EXPECT_NEAR(sum2 / kSamples - mean * mean, 1.0, 0.01);
}

TEST(Rng, CauchyMedianIsZero) {
  Rng rng(9);
  std::vector<double> v(1000000);
  for (double& x : v) x = rng.cauchy();
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  EXPECT_LT(std::abs(v[v.size() / 2]), 0.01);
}

TEST(Rng, PermutationIsABijection) {
  Rng rng(11);
  std::vector<std::size_t> p = rng.permutation(257);
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], i);
}

TEST(NormalizeColumns, UnitNormsAndZeroColumnsKept) {
  DenseMatrix m = DenseMatrix::from_rows({{3.0, 0.0}, {4.0, 0.0}});
  normalize_columns(m);
  EXPECT_DOUBLE_EQ(m(0, 0), 0.6);
  EXPECT_DOUBLE_EQ(m(1, 0), 0.8);
  EXPECT_EQ(m(0, 1), 0.0);
}

TEST(GenerateE3, StructureAndAnchor) {
  const ProblemInstance inst = generate_e3(e3_spec(3));
  for (double c : column_norms(*inst.a)) EXPECT_NEAR(c, 1.0, 1e-12);
  const GroupStructure& g = inst.set.groups;
  std::size_t nonzero = 0;
  for (std::size_t j = 0; j < g.size(); ++j) nonzero += g.group_norm(*inst.ground_truth, j) > 0.0;
  EXPECT_EQ(nonzero, 6u);
  EXPECT_LE(norm2(residual(*inst.a, inst.slater_point, *inst.b)), 1e-10);
  EXPECT_LT(inst.constraints.front().eval(inst.slater_point), 0.0);
  EXPECT_TRUE(inst.set.contains(inst.slater_point));
  EXPECT_EQ(inst.meta.kind, "e3");
  EXPECT_EQ(inst.meta.seed, 3u);
}

TEST(GenerateE3, Deterministic) {
  const ProblemInstance a = generate_e3(e3_spec(5));
  const ProblemInstance b = generate_e3(e3_spec(5));
  EXPECT_EQ(a.a->data(), b.a->data());
  EXPECT_EQ(*a.b, *b.b);
  EXPECT_EQ(a.sigma, b.sigma);
  const ProblemInstance c = generate_e3(e3_spec(6));
  EXPECT_NE(a.a->data(), c.a->data());
}

TEST(GenerateE3, RejectsBadShapes) {
  GenSpec s = e3_spec(1);
  s.n = 121;
  EXPECT_THROW(generate_e3(s), Error);
  s = e3_spec(1);
  s.k = 1000;
  EXPECT_THROW(generate_e3(s), Error);
  s = e3_spec(1);
  s.p = 500;
  EXPECT_THROW(generate_e3(s), Error);
  EXPECT_THROW(generate_e3(e4_spec(1)), Error);
}

TEST(GenerateE4, ComplexEmbeddingAndAnchor) {
  const ProblemInstance inst = generate_e4(e4_spec(3));
  ASSERT_EQ(inst.a->rows(), 30u);
  ASSERT_EQ(inst.a->cols(), 120u);
  const GroupStructure& g = inst.set.groups;
  ASSERT_EQ(g.size(), 60u);
  for (std::size_t i = 0; i < 60; ++i) EXPECT_EQ(g[i], (std::vector<std::size_t>{i, i + 60}));
  const DenseMatrix& a = *inst.a;
  // [[Re, -Im], [Im, Re]] survives the column scaling.
  for (std::size_t i = 0; i < 15; ++i) {
    for (std::size_t c = 0; c < 60; ++c) {
      EXPECT_DOUBLE_EQ(a(i, c), a(i + 15, c + 60));
      EXPECT_DOUBLE_EQ(a(i, c + 60), -a(i + 15, c));
    }
  }
  for (double c : column_norms(a)) EXPECT_NEAR(c, 1.0, 1e-12);
  EXPECT_LE(norm2(residual(a, inst.slater_point, *inst.b)), 1e-10);
  EXPECT_EQ(ell_eval(inst.phi, Vector(30, 0.0)), 0.0);
  EXPECT_LE(inst.constraints.front().eval(inst.slater_point), -0.99 * inst.sigma);
  std::size_t nonzero = 0;
  for (std::size_t j = 0; j < g.size(); ++j) nonzero += g.group_norm(*inst.ground_truth, j) > 0.0;
  EXPECT_EQ(nonzero, 4u);
}

TEST(Generate, DispatchesOnKind) {
  EXPECT_EQ(generate(e3_spec(1)).meta.kind, "e3");
  EXPECT_EQ(generate(e4_spec(1)).meta.kind, "e4");
}

}  // namespace
}  // namespace dcfeas
