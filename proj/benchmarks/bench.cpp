#include <benchmark/benchmark.h>

#include "cyclekit/catalog.hpp"
#include "cyclekit/cycle.hpp"
#include "cyclekit/nodes.hpp"
#include "cyclekit/search.hpp"

using namespace cyclekit;

namespace {

MappingDef matthews() { return MappingDef::validate(4, {{1, 0}, {3, 3}, {5, 2}, {17, 3}}, "matthews"); }

void BM_DetectLongCycle(benchmark::State& state) {
  const auto m = matthews();
  DetectLimits limits;
  limits.max_steps = 100'000;
  for (auto _ : state) benchmark::DoNotOptimize(detect_cycle(m, BigInt(6), limits));
}
BENCHMARK(BM_DetectLongCycle);

void BM_DetectBigIntPath(benchmark::State& state) {
  const auto m = matthews();
  DetectLimits limits;
  limits.max_steps = 100'000;
  limits.max_magnitude = pow(BigInt(10), 45);
  for (auto _ : state) benchmark::DoNotOptimize(detect_cycle(m, BigInt(-513), limits));
}
BENCHMARK(BM_DetectBigIntPath);

void BM_SearchRange(benchmark::State& state) {
  SearchOptions o;
  o.threads = static_cast<unsigned>(state.range(1));
  const std::int64_t n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(search_range(three_x_plus_one(), -n, n, o));
  state.SetItemsProcessed(state.iterations() * (2 * n + 1));
}
BENCHMARK(BM_SearchRange)->Args({10'000, 1})->Args({10'000, 0})->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_cycles_exact(collatz(), p));
}
BENCHMARK(BM_Oracle)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_GenerateNodes(benchmark::State& state) {
  NodeStop stop;
  stop.max_products = static_cast<std::size_t>(state.range(0));
  NodeOptions opts;
  opts.constant = bound_constants::collatz();
  for (auto _ : state) benchmark::DoNotOptimize(generate_nodes(TwoRatioFamily::collatz(), stop, opts));
}
BENCHMARK(BM_GenerateNodes)->Arg(100)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
