#include <benchmark/benchmark.h>

#include "sgfopt/adjoint.hpp"
#include "sgfopt/function_spaces.hpp"
#include "sgfopt/random_fields.hpp"

namespace {

using namespace sgfopt;

ProblemData bench_problem(int n, int steps) {
  const Grid g(n);
  auto rng = make_rng(1, 0);
  const VectorField2D y0 = 0.05 * random_solenoidal_field(g, rng, 4, 2.0);
  const VectorField2D yd = 0.05 * random_solenoidal_field(g, rng, 4, 2.0);
  ModelParams p{.alpha = 0.1, .nu = 0.1, .T = 1.0, .grid_n = n, .m_steps = steps, .L = 10.0, .lambda = 0.0};
  return ProblemData(p, y0, yd);
}

void BM_HelmholtzSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Array2D rhs = Array2D::Random(n, n);
  const double h = 1.0 / (n + 1);
  for (auto _ : state) benchmark::DoNotOptimize(helmholtz_solve(rhs, 0.1, h));
}
BENCHMARK(BM_HelmholtzSolve)->Arg(32)->Arg(64)->Arg(128);

void BM_ArakawaJacobian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Array2D a = Array2D::Random(n, n), b = Array2D::Random(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(arakawa_jacobian(a, b, 1.0 / (n + 1)));
}
BENCHMARK(BM_ArakawaJacobian)->Arg(32)->Arg(64)->Arg(128);

void BM_StateSolve(benchmark::State& state) {
  const ProblemData pd = bench_problem(static_cast<int>(state.range(0)), 50);
  const Trajectory u = pd.zero_trajectory();
  for (auto _ : state) benchmark::DoNotOptimize(solve_state(u, pd, {.record_norms = false}));
}
BENCHMARK(BM_StateSolve)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AdjointSolve(benchmark::State& state) {
  const ProblemData pd = bench_problem(static_cast<int>(state.range(0)), 50);
  const StateSolution s = solve_state(pd.zero_trajectory(), pd, {.record_norms = false});
  for (auto _ : state) benchmark::DoNotOptimize(solve_adjoint(s, pd));
}
BENCHMARK(BM_AdjointSolve)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EstimateTrilinear(benchmark::State& state) {
  const Grid g(32);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_constant(InequalityKind::trilinear, 4, 7, g, 0.1));
}
BENCHMARK(BM_EstimateTrilinear)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
