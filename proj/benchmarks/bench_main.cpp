#include <benchmark/benchmark.h>

#include "crossmax/linear_core.hpp"
#include "crossmax/verifier.hpp"

namespace {

using namespace crossmax;

Problem sample_problem(int n, int dim) {
  Problem p;
  p.grid = Grid(dim, n);
  p.m = 2;
  ConstMatrix A(2, 2);
  A << 1, 0, 1, 2;
  p.A = MatrixField::constant(A, p.grid);
  ConstMatrix K(2, 2);
  K << 0, 1, 1, 0;
  p.K = MatrixField::constant(K, p.grid);
  p.k = 4.0;
  const ScalarField& phi = laplace_phi1(p.grid);
  p.F = VectorField(2, p.grid);
  p.F[0] = phi;
  p.F[1] = phi;
  return p;
}

void BM_Assemble(benchmark::State& state) {
  Problem p = sample_problem(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(p));
}
BENCHMARK(BM_Assemble)->Arg(64)->Arg(256)->Arg(1024);

void BM_Solve(benchmark::State& state) {
  Problem p = sample_problem(static_cast<int>(state.range(0)), 1);
  DiscreteOperator op = assemble_system(p);
  for (auto _ : state) benchmark::DoNotOptimize(solve(op, p.F));
}
BENCHMARK(BM_Solve)->Arg(64)->Arg(256)->Arg(1024);

void BM_Eigenpair(benchmark::State& state) {
  Grid g(1, static_cast<int>(state.range(0)));
  ScalarField one(g, 1.0), zero(g, 0.0);
  DiscreteOperator op = assemble_scalar(one, {}, zero, g);
  for (auto _ : state) benchmark::DoNotOptimize(principal_eigenpair(op));
}
BENCHMARK(BM_Eigenpair)->Arg(64)->Arg(256);

void BM_Verify(benchmark::State& state) {
  Problem p = sample_problem(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(verify_GenMPMat(p));
}
BENCHMARK(BM_Verify)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
