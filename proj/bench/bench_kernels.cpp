#include <benchmark/benchmark.h>

#include <omp.h>

#include "polylap/geometry.hpp"
#include "polylap/graph.hpp"
#include "polylap/line_laplacian.hpp"
#include "polylap/rng.hpp"

using namespace polylap;

namespace {

std::vector<double> random_signal(std::size_t n) {
  CounterRng rng(1, 0);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform();
  return v;
}

double eps_for(std::size_t n) { return std::min(0.5, 40.0 / static_cast<double>(n)); }

// Laplacian apply: OpenMP kernel vs the serial reference.
void BM_ApplyParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = build_graph(sample_cloud(DensitySpec::uniform(), n, 2, 3), 0.02, KernelProfile::indicator());
  const auto u = random_signal(n);
  for (auto _ : state) benchmark::DoNotOptimize(apply_laplacian(g, u));
  state.counters["nnz"] = static_cast<double>(g.nnz());
  state.counters["threads"] = omp_get_max_threads();
}

void BM_ApplySerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = build_graph(sample_cloud(DensitySpec::uniform(), n, 2, 3), 0.02, KernelProfile::indicator());
  const auto u = random_signal(n);
  for (auto _ : state) benchmark::DoNotOptimize(apply_laplacian_serial(g, u));
  state.counters["nnz"] = static_cast<double>(g.nnz());
}

// Graph construction: cell list vs all pairs.
void BM_BuildCellList(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto cloud = sample_cloud(DensitySpec::uniform(), n, 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(cloud, 0.05, KernelProfile::indicator()));
}

void BM_BuildBruteForce(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto cloud = sample_cloud(DensitySpec::uniform(), n, 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(build_graph_brute_force(cloud, 0.05, KernelProfile::indicator()));
}

// d = 1: matrix-free line operator vs stored graph.
void BM_LineApply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto cloud = sample_cloud(DensitySpec::uniform(), n, 1, 5);
  sort_line_cloud(cloud);
  const LineLaplacian op(cloud.coords, eps_for(n));
  const auto u = random_signal(n);
  std::vector<double> out(n);
  for (auto _ : state) {
    op.apply(u, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_GraphApply1d(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto cloud = sample_cloud(DensitySpec::uniform(), n, 1, 5);
  sort_line_cloud(cloud);
  const auto g = build_graph(cloud, eps_for(n), KernelProfile::indicator());
  const GraphLaplacian op(g);
  const auto u = random_signal(n);
  std::vector<double> out(n);
  for (auto _ : state) {
    op.apply(u, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_ApplyParallel)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ApplySerial)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BuildCellList)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildBruteForce)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LineApply)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GraphApply1d)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
