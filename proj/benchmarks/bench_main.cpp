#include <benchmark/benchmark.h>

#include "fbms/gap.hpp"
#include "fbms/identities.hpp"
#include "fbms/reference.hpp"
#include "fbms/solver.hpp"

using namespace fbms;

static void BM_ComputeGeometryCatenoid(benchmark::State& state) {
  const TriMesh mesh = reference_surface(ReferenceSpec::critical_catenoid()).sample(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_geometry(mesh));
  state.counters["vertices"] = mesh.num_vertices();
}
BENCHMARK(BM_ComputeGeometryCatenoid)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_SolvePerturbedDisk(benchmark::State& state) {
  const TriMesh start = perturbed_disk(static_cast<int>(state.range(0)), 0.05, 0);
  const LevelSetDomain ball = LevelSetDomain::ball();
  for (auto _ : state) {
    auto result = solve_free_boundary(start, ball);
    state.counters["iterations"] = result.second.iterations;
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_SolvePerturbedDisk)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_MinkowskiStudy(benchmark::State& state) {
  const ReferenceSurface surface = reference_surface(ReferenceSpec::critical_catenoid());
  IdentityOptions options;
  options.levels = 3;
  options.refiner = [&surface](const TriMesh&, int level) { return surface.sample(44 << level); };
  const TriMesh base = surface.sample(44);
  for (auto _ : state) benchmark::DoNotOptimize(check_identity(IdentityKind::minkowski(), base, surface.domain(), options));
}
BENCHMARK(BM_MinkowskiStudy)->Unit(benchmark::kMillisecond);

static void BM_BoundaryPrincipal(benchmark::State& state) {
  const ReferenceSurface surface = reference_surface(ReferenceSpec::critical_catenoid());
  const TriMesh mesh = surface.sample(116);
  const DiscreteGeometry geom = compute_geometry(mesh);
  const LevelSetDomain domain = surface.domain();
  for (auto _ : state) benchmark::DoNotOptimize(boundary_principal(mesh, geom, domain));
}
BENCHMARK(BM_BoundaryPrincipal)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
