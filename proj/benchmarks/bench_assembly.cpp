#include <benchmark/benchmark.h>

#include "epsreg/epsreg.hpp"

using namespace epsreg;

static void BM_Assemble(benchmark::State& state) {
  const Mesh mesh = build_unit_square_mesh(static_cast<std::size_t>(state.range(0)));
  const Problem p = registry_get("example3");
  const auto tags = classify_boundary(mesh, p.beta);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(mesh, p, 1e-3, tags));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(mesh.triangles().size()));
}
BENCHMARK(BM_Assemble)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_SolveDirect(benchmark::State& state) {
  const Mesh mesh = build_unit_square_mesh(static_cast<std::size_t>(state.range(0)));
  const SparseSystem sys = assemble(mesh, registry_get("example3"), 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_direct(sys));
}
BENCHMARK(BM_SolveDirect)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_SolveGmres(benchmark::State& state) {
  const Mesh mesh = build_unit_square_mesh(static_cast<std::size_t>(state.range(0)));
  const SparseSystem sys = assemble(mesh, registry_get("example3"), 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_iterative(sys, 1e-10, 5000));
}
BENCHMARK(BM_SolveGmres)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_ErrorNorms(benchmark::State& state) {
  const Mesh mesh = build_unit_square_mesh(static_cast<std::size_t>(state.range(0)));
  const Problem p = registry_get("example2");
  const auto tags = classify_boundary(mesh, p.beta);
  const DiscreteField uh = interpolate(mesh, p.u_exact);
  for (auto _ : state) benchmark::DoNotOptimize(compute_errors(uh, p, tags, 1e-3, 0.0));
}
BENCHMARK(BM_ErrorNorms)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
