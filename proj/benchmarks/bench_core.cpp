#include <benchmark/benchmark.h>

#include <cmath>

#include "spinsurf/dirac.hpp"
#include "spinsurf/dsii.hpp"
#include "spinsurf/evolve.hpp"
#include "spinsurf/hierarchy.hpp"
#include "spinsurf/surface.hpp"

using namespace spinsurf;

namespace {

ComplexField gaussian(const Grid2D& g) {
  return ComplexField::sample(g, [](cplx w) { return std::exp(-std::norm(w)) * (1.0 + 0.5 * w); });
}

}  // namespace

static void BM_WirtingerCentral(benchmark::State& state) {
  const ComplexField f = gaussian(make_box(4.0, static_cast<int>(state.range(0)), false));
  for (auto _ : state) benchmark::DoNotOptimize(wirtinger_derivative(f, Direction::z, Scheme::central2));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.size()));
}
BENCHMARK(BM_WirtingerCentral)->Arg(128)->Arg(512);

static void BM_WirtingerSpectral(benchmark::State& state) {
  const ComplexField f = gaussian(make_box(4.0, static_cast<int>(state.range(0)), true));
  for (auto _ : state) benchmark::DoNotOptimize(wirtinger_derivative(f, Direction::z, Scheme::spectral));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.size()));
}
BENCHMARK(BM_WirtingerSpectral)->Arg(128)->Arg(512);

static void BM_ApplyD(benchmark::State& state) {
  const Grid2D g = make_box(4.0, static_cast<int>(state.range(0)), false);
  const ComplexField U = gaussian(g);
  const SpinorField psi{gaussian(g), U.conj()};
  for (auto _ : state) benchmark::DoNotOptimize(apply_D(U, psi));
}
BENCHMARK(BM_ApplyD)->Arg(128)->Arg(512);

static void BM_IntegrateSurfaceR3(benchmark::State& state) {
  const Grid2D g = make_box(1.0, static_cast<int>(state.range(0)), false);
  const SpinorField psi{ComplexField(g, 1.0), ComplexField::sample(g, [](cplx w) { return std::conj(w); })};
  for (auto _ : state) benchmark::DoNotOptimize(integrate_surface_r3(psi));
}
BENCHMARK(BM_IntegrateSurfaceR3)->Arg(129)->Arg(257);

static void BM_VFromU(benchmark::State& state) {
  const ComplexField U = gaussian(make_box(8.0, static_cast<int>(state.range(0)), true));
  for (auto _ : state) benchmark::DoNotOptimize(v_from_u(U));
}
BENCHMARK(BM_VFromU)->Arg(128)->Arg(256);

static void BM_DsiiStep(benchmark::State& state) {
  const ExactSolution sol = catalog("s1", cplx(1.0));
  const Grid2D g = make_box(30.0, static_cast<int>(state.range(0)), true);
  EvolverState s = make_state(ComplexField::sample(g, sol.U_sampler(0.0)), 0.0, 1e-4);
  StepOptions opts;
  opts.history_capacity = 16;
  for (auto _ : state) dsii_step(s, opts);
}
BENCHMARK(BM_DsiiStep)->Arg(128)->Arg(256);

static void BM_SymbolicResidualS2(benchmark::State& state) {
  const ExactSolution sol = catalog("s2");
  for (auto _ : state) benchmark::DoNotOptimize(dsii_symbolic_residual(sol.U, sol.V));
}
BENCHMARK(BM_SymbolicResidualS2)->Unit(benchmark::kMillisecond);

static void BM_NormQuadrature(benchmark::State& state) {
  const ExactSolution sol = catalog("s1", cplx(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(l2_norm_sq(sol.U_sampler(0.5, 1.0)));
}
BENCHMARK(BM_NormQuadrature)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_MkdvIdentity(benchmark::State& state) {
  const Potential1D p = Potential1D::soliton(1, 20.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mkdv_reduction_identity(p));
}
BENCHMARK(BM_MkdvIdentity)->Arg(801)->Arg(3201);
BENCHMARK_MAIN();
