#include <benchmark/benchmark.h>

#include "wcett/dag.hpp"
#include "wcett/estimator.hpp"
#include "wcett/milp.hpp"
#include "wcett/platform.hpp"
#include "wcett/spanner.hpp"

using namespace wcett;

namespace {

ProgramDag merged_diamond(int n) { return merge_series(make_diamond_chain(n)).dag; }

void BM_enumerate_paths(benchmark::State& state) {
  ProgramDag d = merged_diamond(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_paths(d));
}
BENCHMARK(BM_enumerate_paths)->Arg(6)->Arg(10)->Arg(14);

void BM_extreme_path(benchmark::State& state) {
  ProgramDag d = make_layered({static_cast<int>(state.range(0)), 4, 0.5}, 3);
  EdgeWeights w = random_weights(d.num_edges(), 5);
  for (auto _ : state) benchmark::DoNotOptimize(extreme_path(d, w, Sense::Max));
}
BENCHMARK(BM_extreme_path)->Arg(8)->Arg(16)->Arg(32);

void BM_simplex(benchmark::State& state) {
  // repeatability LP over all paths of a diamond chain
  ProgramDag d = merged_diamond(static_cast<int>(state.range(0)));
  PlatformModel p;
  p.true_weights = random_weights(d.num_edges(), 11);
  p.mu_max = 3.0;
  p.seed = 1;
  MeasurementSet ms = measure_all(p, enumerate_paths(d));
  for (auto _ : state) benchmark::DoNotOptimize(solve_delta(d, ms));
}
BENCHMARK(BM_simplex)->Arg(4)->Arg(6)->Arg(8);

void BM_spanner(benchmark::State& state) {
  ProgramDag d = merged_diamond(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_spanner(d));
}
BENCHMARK(BM_spanner)->Arg(4)->Arg(8)->Arg(12);

void BM_worst_path_milp(benchmark::State& state) {
  ProgramDag d = merged_diamond(static_cast<int>(state.range(0)));
  PlatformModel p;
  p.true_weights = random_weights(d.num_edges(), 21);
  p.mu_max = 2.0;
  p.seed = 2;
  MeasurementSet ms = measure_all(p, compute_spanner(d).paths);
  double D = solve_delta(d, ms).D + 1e-9;
  for (auto _ : state) benchmark::DoNotOptimize(solve_worst(d, ms, D));
}
BENCHMARK(BM_worst_path_milp)->Arg(4)->Arg(6)->Arg(8);

void BM_accuracy_milp(benchmark::State& state) {
  ProgramDag d = merged_diamond(static_cast<int>(state.range(0)));
  std::vector<PathVec> basis = compute_spanner(d).paths;
  for (auto _ : state) benchmark::DoNotOptimize(solve_bound(d, basis));
}
BENCHMARK(BM_accuracy_milp)->Arg(3)->Arg(4)->Arg(5);

void BM_end_to_end(benchmark::State& state) {
  ProgramDag d = merged_diamond(static_cast<int>(state.range(0)));
  PlatformModel p;
  p.true_weights = random_weights(d.num_edges(), 31);
  p.mu_max = 1.0;
  p.seed = 3;
  EstimatorOptions opts;
  opts.accuracy = 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_wcett(d, p, opts));
}
BENCHMARK(BM_end_to_end)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
