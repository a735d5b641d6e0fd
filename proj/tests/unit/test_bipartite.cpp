#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "dynconn/bipartite.hpp"
#include "dynconn/oracle.hpp"

using namespace dynconn;

namespace {

::testing::AssertionResult witnessesMatch(const BipartiteBounded& b, const SimpleGraph& ref) {
  const auto d2 = distance2Graph(ref);
  std::size_t pairs = 0;
  for (NodeId x = 0; x < static_cast<NodeId>(ref.capacity()); ++x) {
    if (!ref.isActive(x)) continue;
    for (NodeId z = x + 1; z < static_cast<NodeId>(ref.capacity()); ++z) {
      if (!ref.isActive(z)) continue;
      int paths = 0;
      for (NodeId y : ref.neighbors(x)) paths += ref.hasEdge(y, z);
      if (b.witnesses().count(x, z) != paths)
        return ::testing::AssertionFailure() << "witness {" << x << "," << z << "} = " << b.witnesses().count(x, z)
                                             << ", recount " << paths;
      if (b.distance2().hasEdge(x, z) != d2.hasEdge(x, z))
        return ::testing::AssertionFailure() << "distance-2 edge {" << x << "," << z << "} disagrees";
      pairs += paths > 0;
    }
  }
  if (pairs != b.witnesses().raw().size()) return ::testing::AssertionFailure() << "stale witness entries";
  return ::testing::AssertionSuccess();
}

}  // namespace

TEST(Distance2Witness, CountsAndErases) {
  Distance2Witness w;
  EXPECT_EQ(w.bump(3, 1, 1), 1);
  EXPECT_EQ(w.bump(1, 3, 1), 2);
  EXPECT_EQ(w.count(3, 1), 2);
  EXPECT_EQ(w.bump(1, 3, -2), 0);
  EXPECT_TRUE(w.raw().empty());
  EXPECT_THROW(w.bump(2, 2, 1), ContractViolation);
  EXPECT_THROW(w.bump(1, 2, -1), ContractViolation);
}

TEST(BipartiteBounded, SmallExamples) {
  CostMeter meter;
  BipartiteBounded b(3, meter);
  for (int v = 0; v < 3; ++v) b.activateNode(v);
  EXPECT_TRUE(b.isBipartite());
  EXPECT_EQ(b.isolatedCount(), 3u);
  b.insertEdge(0, 1);
  EXPECT_EQ(b.distance2().nComponents(), 3u);
  EXPECT_TRUE(b.isBipartite());
  b.insertEdge(1, 2);
  b.insertEdge(2, 0);
  EXPECT_EQ(b.distance2().nComponents(), 1u);
  EXPECT_FALSE(b.isBipartite());
  b.deleteEdge(2, 0);
  EXPECT_TRUE(b.isBipartite());
}

TEST(BipartiteBounded, RandomAgainstOracle) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int n = 6 + static_cast<int>(seed) * 4;
    CostMeter meter(seed % 2 ? WritePolicy::common(0.5) : WritePolicy::arbitrary(seed));
    BipartiteBounded b(static_cast<std::size_t>(n), meter);
    SimpleGraph ref(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      b.activateNode(v);
      ref.activate(v);
    }
    std::mt19937_64 rng(seed);
    for (int step = 0; step < 400; ++step) {
      NodeId u = static_cast<NodeId>(rng() % n), v = static_cast<NodeId>(rng() % n);
      if (u == v) continue;
      if (ref.hasEdge(u, v)) {
        b.deleteEdge(u, v);
        ref.removeEdge(u, v);
      } else if (ref.degree(u) < 3 && ref.degree(v) < 3) {
        b.insertEdge(u, v);
        ref.addEdge(u, v);
      } else {
        continue;
      }
      ASSERT_TRUE(witnessesMatch(b, ref)) << "seed " << seed << " step " << step;
      ASSERT_EQ(b.isBipartite(), bfBipartite(ref)) << "seed " << seed << " step " << step;
      ASSERT_LE(b.lastDistance2Changes(), BipartiteBounded::kDistance2Limit);
    }
    EXPECT_LE(b.peakDistance2Changes(), 4);
  }
}

TEST(BipartiteGeneral, CyclesAndCliques) {
  CostMeter meter;
  auto build = [&](int n, std::vector<std::pair<int, int>> edges) {
    auto g = std::make_unique<BipartiteGeneral>(static_cast<std::size_t>(n), edges.size(), meter);
    for (int v = 0; v < n; ++v) g->activateNode(v);
    for (auto [a, c] : edges) g->insertEdge(a, c);
    return g;
  };
  EXPECT_TRUE(build(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})->isBipartite());
  EXPECT_FALSE(build(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}})->isBipartite());
  EXPECT_FALSE(build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})->isBipartite());
  EXPECT_TRUE(build(7, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}})->isBipartite());
}

TEST(BipartiteGeneral, InsertDeleteRoundTrip) {
  CostMeter meter;
  BipartiteGeneral g(6, 12, meter);
  for (int v = 0; v < 6; ++v) g.activateNode(v);
  for (auto [a, c] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {0, 3}, {3, 4}})
    g.insertEdge(a, c);
  const bool bip = g.isBipartite();
  const auto comps = g.inner().graph().nComponents();
  const auto comps2 = g.inner().distance2().nComponents();
  g.insertEdge(0, 2);
  EXPECT_FALSE(g.isBipartite());
  g.deleteEdge(0, 2);
  EXPECT_EQ(g.isBipartite(), bip);
  EXPECT_EQ(g.inner().graph().nComponents(), comps);
  EXPECT_EQ(g.inner().distance2().nComponents(), comps2);
}

TEST(BipartiteGeneral, GadgetIsEvenCycle) {
  CostMeter meter;
  BipartiteGeneral g(5, 8, meter);
  for (int v = 0; v < 5; ++v) g.activateNode(v);
  for (int w = 1; w <= 4; ++w) g.insertEdge(0, w);
  const auto cyc = g.gadget(0);
  ASSERT_EQ(cyc.size(), 8u);
  for (std::size_t i = 0; i < cyc.size(); ++i)
    EXPECT_TRUE(g.inner().graph().hasEdge(cyc[i], cyc[(i + 1) % cyc.size()]));
  EXPECT_LE(g.peakGadgetChanges(), BipartiteGeneral::kGadgetLimit);
  EXPECT_LE(g.peakInnerChanges(), BipartiteGeneral::kHostChangeLimit);
  g.deleteEdge(0, 2);
  EXPECT_EQ(g.gadget(0).size(), 6u);
}

TEST(BipartiteGeneral, ExhaustiveToggleWalkOnFiveNodes) {
  constexpr int n = 5;
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int c = a + 1; c < n; ++c) pairs.emplace_back(a, c);
  CostMeter meter;
  BipartiteGeneral g(n, pairs.size(), meter);
  SimpleGraph ref(n);
  for (int v = 0; v < n; ++v) {
    g.activateNode(v);
    ref.activate(v);
  }
  for (unsigned step = 1; step < (1U << pairs.size()); ++step) {
    const auto [a, c] = pairs[static_cast<std::size_t>(__builtin_ctz(step))];
    if (ref.hasEdge(a, c)) {
      g.deleteEdge(a, c);
      ref.removeEdge(a, c);
    } else {
      g.insertEdge(a, c);
      ref.addEdge(a, c);
    }
    ASSERT_EQ(g.isBipartite(), bfBipartite(ref)) << "step " << step;
  }
  EXPECT_EQ(ref.edgeCount(), 1u);
}

TEST(BipartiteGeneral, RandomAgainstOracle) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const int n = 10 + static_cast<int>(seed) * 3;
    CostMeter meter(seed % 2 ? WritePolicy::common(0.5) : WritePolicy::arbitrary(seed));
    BipartiteGeneral g(static_cast<std::size_t>(n), static_cast<std::size_t>(2 * n), meter);
    SimpleGraph ref(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      g.activateNode(v);
      ref.activate(v);
    }
    std::mt19937_64 rng(seed);
    for (int step = 0; step < 300; ++step) {
      NodeId u = static_cast<NodeId>(rng() % n), v = static_cast<NodeId>(rng() % n);
      if (u == v) continue;
      if (ref.hasEdge(u, v)) {
        g.deleteEdge(u, v);
        ref.removeEdge(u, v);
      } else if (ref.edgeCount() < g.edgeCapacity()) {
        g.insertEdge(u, v);
        ref.addEdge(u, v);
      }
      ASSERT_EQ(g.isBipartite(), bfBipartite(ref)) << "seed " << seed << " step " << step;
    }
  }
}
