#include <gtest/gtest.h>

#include <functional>
#include <numeric>
#include <random>

#include "dynconn/checkers.hpp"
#include "dynconn/conn_general.hpp"
#include "dynconn/oracle.hpp"

using namespace dynconn;

namespace {

void activateAll(ConnGeneral& g, int n) {
  for (int v = 0; v < n; ++v) g.activateNode(v);
}

// Marked edges form a spanning forest of the oracle graph.
::testing::AssertionResult spansForest(const ConnGeneral& g, const SimpleGraph& ref) {
  std::vector<int> parent(ref.capacity());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::size_t marked = 0;
  for (NodeId a = 0; a < static_cast<NodeId>(ref.capacity()); ++a) {
    if (!ref.isActive(a)) continue;
    for (NodeId b : ref.neighbors(a)) {
      if (a > b || !g.treeEdge(a, b)) continue;
      ++marked;
      int ra = find(a), rb = find(b);
      if (ra == rb) return ::testing::AssertionFailure() << "tree edges close a cycle at " << a << "-" << b;
      parent[ra] = rb;
    }
  }
  if (marked != ref.activeCount() - bfComponents(ref))
    return ::testing::AssertionFailure() << marked << " tree edges, expected " << ref.activeCount() - bfComponents(ref);
  return ::testing::AssertionSuccess();
}

}  // namespace

TEST(ConnGeneral, FirstEdgeBetweenIsolatedNodes) {
  CostMeter meter;
  ConnGeneral g(4, 8, meter);
  activateAll(g, 4);
  EXPECT_EQ(g.isolatedCount(), 4u);
  g.insertEdge(0, 1);
  EXPECT_EQ(g.lastCounts(), (InnerOpCounts{0, 0, 1, 0}));
  EXPECT_TRUE(g.treeEdge(0, 1));
  EXPECT_EQ(g.nComponents(), 3u);
  EXPECT_EQ(g.isolatedCount(), 2u);
}

TEST(ConnGeneral, RaisingDegreeToFourStaysWithinBudget) {
  CostMeter meter;
  ConnGeneral g(8, 16, meter);
  activateAll(g, 8);
  for (int w = 1; w <= 3; ++w) g.insertEdge(0, w);
  g.insertEdge(0, 4);
  const auto c = g.lastCounts();
  EXPECT_LE(c.nodeAdds, 2);
  EXPECT_LE(c.edgeDeletes, 2);
  EXPECT_LE(c.edgeInserts, 5);
  EXPECT_EQ(c.nodeAdds, 1);
  EXPECT_EQ(c.edgeDeletes, 1);
  g.insertEdge(5, 6);
  g.insertEdge(4, 5);
  for (int w = 1; w <= 3; ++w) g.insertEdge(w, 5 + (w % 2));
  g.insertEdge(0, 5);
  EXPECT_EQ(g.lastCounts(), (InnerOpCounts{2, 0, 5, 2}));
  g.deleteEdge(0, 5);
  EXPECT_EQ(g.lastCounts(), (InnerOpCounts{0, 2, 2, 5}));
  EXPECT_TRUE(checkGadgets(g).ok);
}

TEST(ConnGeneral, TriangleReplacementIsHostEdge) {
  CostMeter meter;
  ConnGeneral g(3, 6, meter);
  activateAll(g, 3);
  g.insertEdge(0, 1);
  g.insertEdge(1, 2);
  g.insertEdge(2, 0);
  EXPECT_FALSE(g.treeEdge(2, 0));
  EXPECT_EQ(g.findReplacement(0, 1).kind, ReplacementReport::Kind::ReplacedBy);
  auto r = g.deleteEdge(0, 1);
  EXPECT_EQ(r.kind, ReplacementReport::Kind::ReplacedBy);
  EXPECT_EQ(r.edge, (Edge{0, 2}));
  EXPECT_TRUE(g.treeEdge(0, 2));
}

TEST(ConnGeneral, StarIsConnected) {
  CostMeter meter;
  ConnGeneral g(6, 10, meter);
  activateAll(g, 6);
  for (int w = 1; w <= 5; ++w) g.insertEdge(0, w);
  EXPECT_TRUE(g.connected(2, 5));
  EXPECT_EQ(g.nComponents(), 1u);
  EXPECT_EQ(g.gadget(0).size(), 5u);
  EXPECT_TRUE(checkGadgets(g).ok) << checkGadgets(g).message;
}

TEST(ConnGeneral, Preconditions) {
  CostMeter meter;
  ConnGeneral g(3, 1, meter);
  activateAll(g, 3);
  g.insertEdge(0, 1);
  EXPECT_THROW(g.insertEdge(1, 2), PreconditionError);
  EXPECT_THROW(g.insertEdge(0, 1), PreconditionError);
  EXPECT_THROW(g.insertEdge(2, 2), PreconditionError);
  EXPECT_THROW(g.deleteEdge(1, 2), PreconditionError);
  EXPECT_THROW(g.deactivateNode(0), PreconditionError);
}

class ConnGeneralRandom : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ConnGeneralRandom, MatchesOracle) {
  const std::uint64_t seed = GetParam();
  std::mt19937_64 rng(seed);
  const int n = 4 + static_cast<int>(seed % 5) * 6;
  CostMeter meter(seed % 2 ? WritePolicy::common(0.5) : WritePolicy::arbitrary(seed));
  ConnGeneral g(static_cast<std::size_t>(n), static_cast<std::size_t>(4 * n), meter);
  SimpleGraph ref(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    g.activateNode(v);
    ref.activate(v);
  }
  for (int step = 0; step < 600; ++step) {
    NodeId u = static_cast<NodeId>(rng() % n), v = static_cast<NodeId>(rng() % n);
    int kind = static_cast<int>(rng() % 10);
    SCOPED_TRACE(::testing::Message() << "step " << step << " op " << kind << " " << u << " " << v);
    if (kind == 0) {
      if (!ref.isActive(u)) {
        g.activateNode(u);
        ref.activate(u);
      } else if (ref.degree(u) == 0) {
        g.deactivateNode(u);
        ref.deactivate(u);
      }
    } else if (u != v && ref.isActive(u) && ref.isActive(v)) {
      if (ref.hasEdge(u, v)) {
        if (kind < 5) {
          const bool wasTree = g.treeEdge(u, v);
          auto r = g.deleteEdge(u, v);
          ref.removeEdge(u, v);
          if (wasTree) {
            const bool stays = bfConnected(ref, u, v);
            ASSERT_EQ(r.kind == ReplacementReport::Kind::ReplacedBy, stays);
            if (stays) ASSERT_TRUE(ref.hasEdge(r.edge.u, r.edge.v));
          }
        }
      } else if (ref.edgeCount() < g.edgeCapacity()) {
        g.insertEdge(u, v);
        ref.addEdge(u, v);
      }
    }
    auto gadgets = checkGadgets(g);
    ASSERT_TRUE(gadgets.ok) << gadgets.message;
    auto tours = checkEulerTour(g.inner(), step % 8 == 0);
    ASSERT_TRUE(tours.ok) << tours.message;
    ASSERT_EQ(g.nComponents(), bfComponents(ref));
    if (ref.isActive(u) && ref.isActive(v)) ASSERT_EQ(g.connected(u, v), bfConnected(ref, u, v));
    ASSERT_TRUE(spansForest(g, ref));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ConnGeneralRandom, ::testing::Range<std::uint64_t>(1, 21));
