#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dynconn/checkers.hpp"
#include "dynconn/euler_forest.hpp"
#include "dynconn/oracle.hpp"

using namespace dynconn;

namespace {

std::vector<TourEdge> tourOf(const EulerForest& f, NodeId v) {
  std::vector<TourEdge> out;
  ArrayId a = f.treeArray(v);
  if (a == kNoArray) return out;
  for (ChunkId c : f.store().order(a))
    for (const auto& e : f.store().chunk(c).edges) out.push_back(e);
  return out;
}

void activateAll(EulerForest& f, int n) {
  for (int v = 0; v < n; ++v) f.activateNode(v);
}

void expectValid(const EulerForest& f) {
  auto report = checkEulerTour(f);
  ASSERT_TRUE(report.ok) << report.message;
}

}  // namespace

TEST(EulerForest, SizingFormulas) {
  EXPECT_EQ(chunkCapacityFor(1), 2u);
  EXPECT_EQ(chunkCapacityFor(12), 6u);
  EXPECT_EQ(slotCountFor(12), 4u * 6 + 8);
}

TEST(EulerForest, MergeBuildsSpliceOrder) {
  CostMeter meter;
  EulerForest f(5, meter);
  activateAll(f, 5);
  f.insertEdge(1, 2);
  f.insertEdge(3, 4);
  f.insertEdge(2, 3);
  std::vector<TourEdge> want{{1, 2}, {2, 3}, {3, 4}, {4, 3}, {3, 2}, {2, 1}};
  auto got = tourOf(f, 1);
  ASSERT_EQ(got.size(), want.size());
  auto it = std::find(got.begin(), got.end(), want.front());
  ASSERT_NE(it, got.end());
  std::rotate(got.begin(), it, got.end());
  EXPECT_EQ(got, want);
  EXPECT_EQ(f.nComponents(), 2u);
  expectValid(f);
}

TEST(EulerForest, TriangleReplacement) {
  CostMeter meter;
  EulerForest f(3, meter);
  activateAll(f, 3);
  f.insertEdge(0, 1);
  f.insertEdge(1, 2);
  f.insertEdge(2, 0);
  EXPECT_TRUE(f.treeEdge(0, 1));
  EXPECT_FALSE(f.treeEdge(2, 0));
  auto r = f.deleteEdge(0, 1);
  EXPECT_EQ(r.kind, ReplacementReport::Kind::ReplacedBy);
  EXPECT_EQ(r.edge, (Edge{0, 2}));
  EXPECT_TRUE(f.treeEdge(0, 2));
  EXPECT_TRUE(f.connected(0, 1));
  EXPECT_EQ(f.nComponents(), 1u);
  expectValid(f);
}

TEST(EulerForest, HintSelectsReplacement) {
  CostMeter meter;
  EulerForest f(4, meter);
  activateAll(f, 4);
  f.insertEdge(0, 1);
  f.insertEdge(1, 2);
  f.insertEdge(2, 3);
  f.insertEdge(3, 0);
  f.insertEdge(0, 2);
  auto r = f.deleteEdgeWithHint(1, 2, Edge{0, 2});
  EXPECT_EQ(r.kind, ReplacementReport::Kind::ReplacedBy);
  EXPECT_EQ(r.edge, (Edge{0, 2}));
  EXPECT_TRUE(f.treeEdge(0, 2));
  EXPECT_FALSE(f.treeEdge(3, 0));
  expectValid(f);
}

TEST(EulerForest, PathSplitAndNonTreeDelete) {
  CostMeter meter;
  EulerForest f(4, meter);
  activateAll(f, 4);
  f.insertEdge(0, 1);
  f.insertEdge(1, 2);
  f.insertEdge(2, 3);
  auto r = f.deleteEdge(1, 2);
  EXPECT_EQ(r.kind, ReplacementReport::Kind::SplitNoReplacement);
  EXPECT_FALSE(f.connected(0, 3));
  EXPECT_EQ(f.nComponents(), 2u);
  f.insertEdge(0, 3);
  f.insertEdge(1, 2);
  EXPECT_FALSE(f.treeEdge(1, 2));
  EXPECT_EQ(f.deleteEdge(1, 2).kind, ReplacementReport::Kind::NonTreeDeleted);
  expectValid(f);
}

TEST(EulerForest, FindReplacementLeavesStateUnchanged) {
  CostMeter meter;
  EulerForest f(3, meter);
  activateAll(f, 3);
  f.insertEdge(0, 1);
  f.insertEdge(1, 2);
  f.insertEdge(2, 0);
  auto before = tourOf(f, 0);
  auto r = f.findReplacement(0, 1);
  EXPECT_EQ(r.kind, ReplacementReport::Kind::ReplacedBy);
  EXPECT_EQ(tourOf(f, 0), before);
  EXPECT_TRUE(f.treeEdge(0, 1));
  EXPECT_EQ(f.findReplacement(2, 0).kind, ReplacementReport::Kind::NonTreeDeleted);
}

TEST(EulerForest, Preconditions) {
  CostMeter meter;
  EulerForest f(5, meter);
  activateAll(f, 5);
  f.insertEdge(0, 1);
  f.insertEdge(0, 2);
  f.insertEdge(0, 3);
  EXPECT_THROW(f.insertEdge(0, 4), PreconditionError);
  EXPECT_THROW(f.insertEdge(0, 1), PreconditionError);
  EXPECT_THROW(f.insertEdge(4, 4), PreconditionError);
  EXPECT_THROW(f.deleteEdge(1, 2), PreconditionError);
  EXPECT_THROW(f.deactivateNode(0), PreconditionError);
  f.deactivateNode(4);
  EXPECT_THROW(f.connected(4, 0), PreconditionError);
  EXPECT_EQ(f.nComponents(), 1u);
}

struct RandomCase {
  int n;
  std::uint64_t seed;
  bool common;
};

class EulerForestRandom : public ::testing::TestWithParam<RandomCase> {};

TEST_P(EulerForestRandom, MatchesOracle) {
  const auto [n, seed, common] = GetParam();
  CostMeter meter(common ? WritePolicy::common(0.5) : WritePolicy::arbitrary(seed));
  EulerForest f(static_cast<std::size_t>(n), meter);
  SimpleGraph g(static_cast<std::size_t>(n));
  std::mt19937_64 rng(seed);
  auto pick = [&] { return static_cast<NodeId>(rng() % static_cast<std::uint64_t>(n)); };
  for (int v = 0; v < n; ++v)
    if (rng() % 8 != 0) {
      f.activateNode(v);
      g.activate(v);
    }
  for (int step = 0; step < 1500; ++step) {
    NodeId u = pick(), v = pick();
    int kind = static_cast<int>(rng() % 10);
    SCOPED_TRACE(::testing::Message() << "op " << kind << " " << u << " " << v);
    if (kind == 0) {
      if (g.isActive(u)) {
        if (g.degree(u) == 0) {
          f.deactivateNode(u);
          g.deactivate(u);
        }
      } else {
        f.activateNode(u);
        g.activate(u);
      }
    } else if (u != v && g.isActive(u) && g.isActive(v)) {
      if (g.hasEdge(u, v)) {
        if (kind < 6) {
          f.deleteEdge(u, v);
          g.removeEdge(u, v);
        }
      } else if (g.degree(u) < 3 && g.degree(v) < 3) {
        f.insertEdge(u, v);
        g.addEdge(u, v);
      }
    }
    auto report = checkEulerTour(f);
    ASSERT_TRUE(report.ok) << "step " << step << ": " << report.message;
    ASSERT_EQ(f.nComponents(), bfComponents(g)) << "step " << step;
    if (g.isActive(u) && g.isActive(v)) ASSERT_EQ(f.connected(u, v), bfConnected(g, u, v)) << "step " << step;
  }
  std::size_t treeEdges = 0;
  for (NodeId a = 0; a < n; ++a)
    if (g.isActive(a))
      for (NodeId b : g.neighbors(a))
        if (a < b && f.treeEdge(a, b)) ++treeEdges;
  EXPECT_EQ(treeEdges, f.treeEdgeCount());
}

INSTANTIATE_TEST_SUITE_P(Sizes, EulerForestRandom,
                         ::testing::Values(RandomCase{6, 1, true}, RandomCase{16, 2, true},
                                           RandomCase{16, 3, false},
                                           RandomCase{40, 4, true},
                                           RandomCase{128, 5, false},
                                           RandomCase{128, 6, true}));

std::vector<RandomCase> manySeeds() {
  std::vector<RandomCase> out;
  for (std::uint64_t s = 10; s < 50; ++s) out.push_back({static_cast<int>(4 + s % 29), s, s % 2 == 0});
  return out;
}

INSTANTIATE_TEST_SUITE_P(Seeds, EulerForestRandom, ::testing::ValuesIn(manySeeds()));

TEST(EulerForest, UpdatesRunOnFixedSchedules) {
  CostMeter meter;
  EulerForest f(64, meter);
  activateAll(f, 64);
  std::mt19937_64 rng(9);
  for (int step = 0; step < 400; ++step) {
    NodeId u = static_cast<NodeId>(rng() % 64), v = static_cast<NodeId>(rng() % 64);
    if (u == v) continue;
    meter.reset();
    if (f.hasEdge(u, v)) {
      f.deleteEdge(u, v);
      EXPECT_EQ(meter.depth(), EulerForest::kDeleteRounds);
    } else if (f.degree(u) < 3 && f.degree(v) < 3) {
      f.insertEdge(u, v);
      EXPECT_EQ(meter.depth(), EulerForest::kInsertRounds);
    }
  }
  EXPECT_GT(meter.deepestScheduled(), 0u);
  EXPECT_LE(meter.deepestScheduled(), EulerForest::kDeleteRounds);
}
