#include <benchmark/benchmark.h>

#include <random>

#include "dynconn/sparsify.hpp"

using namespace dynconn;

// Random insert/delete churn at a steady edge count of about n/2.
static void churn(benchmark::State& state, Mode mode) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CostMeter meter(WritePolicy::common(0.25));
  SparsTree tree(n, mode, meter);
  for (std::size_t v = 0; v < n; ++v) tree.activateNode(static_cast<NodeId>(v));
  std::mt19937_64 rng(4);
  std::vector<std::pair<NodeId, NodeId>> present;
  auto pick = [&] { return static_cast<NodeId>(rng() % n); };
  while (present.size() < n / 2) {
    NodeId x = pick(), y = pick();
    if (x == y || tree.hasEdge(x, y)) continue;
    tree.insertEdge(x, y);
    present.emplace_back(x, y);
  }
  std::uint64_t work = 0, ops = 0;
  for (auto _ : state) {
    const std::size_t i = rng() % present.size();
    auto [x, y] = present[i];
    meter.reset();
    tree.deleteEdge(x, y);
    work += meter.work();
    NodeId a = pick(), b = pick();
    while (a == b || tree.hasEdge(a, b)) a = pick(), b = pick();
    meter.reset();
    tree.insertEdge(a, b);
    work += meter.work();
    present[i] = {a, b};
    ops += 2;
  }
  state.counters["work/op"] = static_cast<double>(work) / static_cast<double>(std::max<std::uint64_t>(ops, 1));
}

static void BM_ConnectivityChurn(benchmark::State& state) { churn(state, Mode::Connectivity); }
static void BM_BipartitenessChurn(benchmark::State& state) { churn(state, Mode::Bipartiteness); }
BENCHMARK(BM_ConnectivityChurn)->RangeMultiplier(4)->Range(256, 16384);
BENCHMARK(BM_BipartitenessChurn)->RangeMultiplier(4)->Range(256, 4096);

BENCHMARK_MAIN();
