#include <benchmark/benchmark.h>

#include "walklab/electrical.hpp"
#include "walklab/gnp.hpp"
#include "walklab/laplacian.hpp"
#include "walklab/mbfs.hpp"
#include "walklab/walk_indices.hpp"

namespace {

using namespace walklab;

Graph sampled(int n, double np, std::uint64_t seed) {
  return sample_connected_gnp(n, np / n, seed).graph;
}

void bm_sample_gnp(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto g = sample_gnp(n, 30.0 / n, seed++);
    benchmark::DoNotOptimize(g.m);
  }
}
BENCHMARK(bm_sample_gnp)->Arg(500)->Arg(2000);

void bm_resistance_solve(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Graph g = sampled(n, 30.0, 7);
  LaplacianSolver solver(g);
  int j = 1;
  for (auto _ : state) {
    auto r = exact_resistance(solver, g, 0, j);
    benchmark::DoNotOptimize(r.value);
    j = j % (n - 1) + 1;
  }
}
BENCHMARK(bm_resistance_solve)->Arg(500)->Arg(2000);

void bm_pinv_engine(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Graph g = sampled(n, 30.0, 7);
  for (auto _ : state) {
    LaplacianSolver solver(g);
    auto engine = build_pinv_engine(solver, g);
    benchmark::DoNotOptimize(engine.trace);
  }
}
BENCHMARK(bm_pinv_engine)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void bm_mbfs(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Graph g = sampled(n, 30.0, 7);
  for (auto _ : state) {
    auto trace = run_mbfs(g, {0, 1});
    auto pruned = prune(g, trace, 1);
    benchmark::DoNotOptimize(pruned.psi1_count(0));
  }
}
BENCHMARK(bm_mbfs)->Arg(500)->Arg(2000);

void bm_hitting_column(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Graph g = sampled(n, 30.0, 7);
  for (auto _ : state) {
    auto h = hitting_column(g, 0);
    benchmark::DoNotOptimize(h[1]);
  }
}
BENCHMARK(bm_hitting_column)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
