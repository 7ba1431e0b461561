// Hot-path benchmarks: kernel evaluation, the matrix-free operator apply
// at several sizes, a full small solve, and the comparison metric.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "smallscat/compare.hpp"
#include "smallscat/kernel.hpp"
#include "smallscat/model.hpp"
#include "smallscat/solver.hpp"

using namespace smallscat;

namespace {

PhysicalConfig reference_config() {
  PhysicalConfig cfg;
  cfg.k = 0.182651;
  cfg.alpha = {1.0, 0.0, 0.0};
  cfg.kappa = 0.99;
  cfg.omega_side = 1.0;
  cfg.n0 = {1.0, 0.0};
  cfg.n_desired = {-1.0, 0.001};
  return cfg;
}

SystemOperator particle_operator(std::size_t count, double spacing) {
  const PhysicalConfig cfg = reference_config();
  const ParticleCloud cloud =
      place_uniform_lattice(count, spacing, {cfg.omega_side}, 1e-4);
  const MaterialRecipe recipe = design_material(
      cfg, uniform_density(count, 1e-4, cfg.kappa, cfg.omega_volume()));
  return make_ori_operator(
      cloud, cfg, [=](const Vec3& p) { return recipe.impedance_at(p); });
}

}  // namespace

static void BM_KernelEval(benchmark::State& state) {
  const Vec3 x{0.1, 0.2, 0.3};
  const Vec3 t{0.7, 0.5, 0.9};
  for (auto _ : state) {
    benchmark::DoNotOptimize(green_free(0.182651, x, t));
  }
}
BENCHMARK(BM_KernelEval);

static void BM_OperatorApply(benchmark::State& state) {
  const std::size_t count = static_cast<std::size_t>(state.range(0));
  const SystemOperator op = particle_operator(count, 0.04);
  const FieldVector v = incident_rhs(op, reference_config());
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_operator(op, v));
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(count) *
                          static_cast<int64_t>(count - 1));
}
BENCHMARK(BM_OperatorApply)->Arg(512)->Arg(1728)->Arg(4096);

static void BM_GridOperatorApply(benchmark::State& state) {
  const PhysicalConfig cfg = reference_config();
  const MaterialRecipe recipe = design_material(
      cfg, uniform_density(10000, 1e-4, cfg.kappa, cfg.omega_volume()));
  const GridPartition grid =
      partition_cube({cfg.omega_side}, static_cast<std::size_t>(state.range(0)));
  const SystemOperator op = make_ie_operator(
      grid, cfg, [&](const Vec3& p) { return recipe.potential_at(p); });
  const FieldVector v = incident_rhs(op, cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_operator(op, v));
  }
}
BENCHMARK(BM_GridOperatorApply)->Arg(5)->Arg(10);

static void BM_SolveSmall(benchmark::State& state) {
  const SystemOperator op = particle_operator(512, 0.05);
  const FieldVector rhs = incident_rhs(op, reference_config());
  for (auto _ : state) {
    benchmark::DoNotOptimize(gmres_solve(op, rhs));
  }
}
BENCHMARK(BM_SolveSmall);

static void BM_GridMetric(benchmark::State& state) {
  const ParticleCloud cloud = place_uniform_lattice(10000, 0.04, {1.0}, 1e-4);
  const GridPartition grid = partition_cube({1.0}, 5);
  std::mt19937 rng(8080);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Complex> fine(cloud.size());
  for (Complex& z : fine) z = {unit(rng), unit(rng)};
  std::vector<Complex> coarse(grid.total_cells());
  for (Complex& z : coarse) z = {unit(rng), unit(rng)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sup_mean_difference(*cloud.centers, fine, grid, coarse));
  }
}
BENCHMARK(BM_GridMetric);

BENCHMARK_MAIN();
