#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "dynconn/agg_tree.hpp"
#include "dynconn/euler_forest.hpp"

using namespace dynconn;

static void BM_ReduceExtremum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CostMeter meter(WritePolicy::common(0.25));
  std::vector<std::int64_t> values(n);
  std::mt19937_64 rng(1);
  for (auto& v : values) v = static_cast<std::int64_t>(rng() % 1000);
  for (auto _ : state) {
    meter.reset();
    benchmark::DoNotOptimize(reduceExtremum<std::int64_t>(values, Extremum::Min, meter));
  }
  state.counters["work"] = static_cast<double>(meter.work());
  state.counters["depth"] = static_cast<double>(meter.depth());
}
BENCHMARK(BM_ReduceExtremum)->RangeMultiplier(4)->Range(16, 16384);

static void BM_AggTreeInsertDelete(benchmark::State& state) {
  const auto leaves = static_cast<std::size_t>(state.range(0));
  CostMeter meter;
  AggArena arena(64, meter);
  AggTree tree(arena);
  for (std::size_t i = 0; i < leaves; ++i) {
    BitArray bits(64);
    bits.set(i % 64);
    tree.treeInsert(i, bits);
  }
  std::mt19937_64 rng(2);
  for (auto _ : state) {
    const std::size_t at = rng() % leaves;
    tree.treeInsert(at, BitArray(64));
    tree.treeDelete(at);
  }
}
BENCHMARK(BM_AggTreeInsertDelete)->RangeMultiplier(4)->Range(16, 4096);

// Path graph 0-1-...-(n-1); each iteration closes and reopens a cycle and
// cuts and relinks a bridge.
static void BM_EulerForestUpdates(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CostMeter meter(WritePolicy::common(0.25));
  EulerForest forest(n, meter);
  for (std::size_t v = 0; v < n; ++v) forest.activateNode(static_cast<NodeId>(v));
  for (std::size_t v = 0; v + 1 < n; ++v) forest.insertEdge(static_cast<NodeId>(v), static_cast<NodeId>(v + 1));
  std::mt19937_64 rng(3);
  std::uint64_t work = 0, ops = 0;
  for (auto _ : state) {
    const auto v = static_cast<NodeId>(1 + rng() % (n - 2));
    meter.reset();
    forest.deleteEdge(v, v + 1);
    forest.insertEdge(v, v + 1);
    work += meter.work();
    ops += 2;
  }
  state.counters["work/op"] = static_cast<double>(work) / static_cast<double>(std::max<std::uint64_t>(ops, 1));
}
BENCHMARK(BM_EulerForestUpdates)->RangeMultiplier(4)->Range(64, 16384);

BENCHMARK_MAIN();
