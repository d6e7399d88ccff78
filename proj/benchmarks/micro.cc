#include <benchmark/benchmark.h>

#include "dcfeas/fpa_convex.hpp"
#include "dcfeas/instance_gen.hpp"
#include "dcfeas/linalg.hpp"
#include "dcfeas/subproblem.hpp"

namespace {

dcfeas::ProblemInstance small_e3(std::size_t scale) {
  dcfeas::GenSpec spec;
  spec.kind = dcfeas::ProblemKind::kE3;
  spec.p = 45 * scale;
  spec.n = 160 * scale;
  spec.k = 8 * scale;
  spec.seed = 7;
  return dcfeas::generate_e3(spec);
}

void BM_Matvec(benchmark::State& state) {
  const auto inst = small_e3(static_cast<std::size_t>(state.range(0)));
  const dcfeas::Vector x(inst.dimension(), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(dcfeas::matvec(*inst.a, x));
}
BENCHMARK(BM_Matvec)->Arg(1)->Arg(4)->Arg(8);

void BM_HouseholderQR(benchmark::State& state) {
  const auto inst = small_e3(static_cast<std::size_t>(state.range(0)));
  const dcfeas::DenseMatrix at = inst.a->transpose();
  for (auto _ : state) benchmark::DoNotOptimize(dcfeas::householder_qr(at));
}
BENCHMARK(BM_HouseholderQR)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_SubproblemSolve(benchmark::State& state) {
  const auto inst = small_e3(static_cast<std::size_t>(state.range(0)));
  const auto& g = inst.constraints.front();
  dcfeas::Vector x = inst.slater_point;
  for (double& v : x) v *= 0.5;
  const dcfeas::Vector a = g.grad(x);
  const double r = dcfeas::dot(a, x) - g.eval(x);
  const dcfeas::SubproblemSpec spec{x, 1.0, a, r, &inst.set};
  for (auto _ : state) benchmark::DoNotOptimize(dcfeas::solve_linearized_prox(spec));
}
BENCHMARK(BM_SubproblemSolve)->Arg(1)->Arg(4)->Arg(8);

void BM_FpaSolve(benchmark::State& state) {
  const auto inst = small_e3(1);
  for (auto _ : state) benchmark::DoNotOptimize(dcfeas::fpa_solve(inst, inst.slater_point));
}
BENCHMARK(BM_FpaSolve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
