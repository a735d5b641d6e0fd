#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dynconn/agg_tree.hpp"
#include "dynconn/checkers.hpp"

using namespace dynconn;

namespace {

constexpr std::size_t kWidth = 40;

BitArray randomBits(std::mt19937& rng, double density = 0.1) {
  BitArray b(kWidth);
  std::bernoulli_distribution coin(density);
  for (std::size_t j = 0; j < kWidth; ++j)
    if (coin(rng)) b.set(j);
  return b;
}

BitArray orAll(const std::vector<BitArray>& seq) {
  BitArray acc(kWidth);
  for (const auto& b : seq) acc |= b;
  return acc;
}

// Plain sequence kept alongside the tree.
struct Mirror {
  AggTree tree;
  std::vector<BitArray> seq;

  void expectConsistent() const {
    auto report = checkAggTree(tree);
    ASSERT_TRUE(report.ok) << report.message;
    ASSERT_EQ(tree.leafSequence(), seq);
    ASSERT_EQ(tree.rootBits(), orAll(seq));
    if (!seq.empty()) ASSERT_LE(tree.treeHeight(), std::log2(static_cast<double>(seq.size())) + 2);
  }
};

AggTree build(AggArena& arena, const std::vector<BitArray>& seq) {
  AggTree t(arena);
  for (std::size_t i = 0; i < seq.size(); ++i) t.treeInsert(i, seq[i]);
  return t;
}

}  // namespace

TEST(AggTree, InsertIntoEmpty) {
  CostMeter m;
  AggArena arena(kWidth, m);
  AggTree t(arena);
  BitArray b(kWidth);
  b.set(3);
  t.treeInsert(0, b);
  EXPECT_EQ(t.treeHeight(), 0);
  EXPECT_EQ(t.rootBits(), b);
  EXPECT_TRUE(checkAggTree(t).ok);
}

TEST(AggTree, JoinTwoLeaves) {
  CostMeter m;
  AggArena arena(kWidth, m);
  AggTree t = AggTree::treeJoin(AggTree::singleton(arena, BitArray(kWidth)), AggTree::singleton(arena, BitArray(kWidth)));
  EXPECT_EQ(t.treeHeight(), 1);
  EXPECT_EQ(t.leafCount(), 2u);
  EXPECT_TRUE(checkAggTree(t).ok);
}

TEST(AggTree, PositionErrors) {
  CostMeter m;
  AggArena arena(kWidth, m);
  AggTree t(arena);
  EXPECT_THROW(t.treeInsert(1, BitArray(kWidth)), PreconditionError);
  EXPECT_THROW(t.treeDelete(0), PreconditionError);
  t.treeInsert(0, BitArray(kWidth));
  EXPECT_THROW(AggTree::treeSplit(std::move(t), 1), PreconditionError);
}

TEST(AggTree, SixLeavesPlusOne) {
  CostMeter m;
  AggArena arena(kWidth, m);
  std::mt19937 rng(1);
  std::vector<BitArray> seq;
  for (int i = 0; i < 7; ++i) seq.push_back(randomBits(rng));
  Mirror mirror{build(arena, seq), seq};
  mirror.expectConsistent();
}

TEST(AggTree, DeleteOnlyCarrierClearsRootBit) {
  CostMeter m;
  AggArena arena(kWidth, m);
  std::vector<BitArray> seq(5, BitArray(kWidth));
  seq[2].set(9);
  AggTree t = build(arena, seq);
  EXPECT_TRUE(t.rootBits().test(9));
  t.treeDelete(2);
  EXPECT_FALSE(t.rootBits().test(9));
  EXPECT_TRUE(checkAggTree(t).ok);
}

TEST(AggTree, JoinAllHeightCombinations) {
  std::mt19937 rng(2);
  for (std::size_t a = 0; a <= 40; ++a) {
    for (std::size_t b = 0; b <= 40; b += (b < 10 ? 1 : 7)) {
      CostMeter m;
      AggArena arena(kWidth, m);
      std::vector<BitArray> sa, sb;
      for (std::size_t i = 0; i < a; ++i) sa.push_back(randomBits(rng));
      for (std::size_t i = 0; i < b; ++i) sb.push_back(randomBits(rng));
      Mirror mirror{AggTree::treeJoin(build(arena, sa), build(arena, sb)), sa};
      mirror.seq.insert(mirror.seq.end(), sb.begin(), sb.end());
      mirror.expectConsistent();
    }
  }
}

TEST(AggTree, SplitEveryPosition) {
  std::mt19937 rng(3);
  for (std::size_t n : {1, 2, 6, 7, 13, 36, 50, 130}) {
    for (std::size_t i = 0; i < n; ++i) {
      CostMeter m;
      AggArena arena(kWidth, m);
      std::vector<BitArray> seq;
      for (std::size_t k = 0; k < n; ++k) seq.push_back(randomBits(rng));
      auto parts = AggTree::treeSplit(build(arena, seq), i);
      Mirror left{std::move(parts.left), {seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(i)}};
      Mirror right{std::move(parts.right), {seq.begin() + static_cast<std::ptrdiff_t>(i) + 1, seq.end()}};
      left.expectConsistent();
      right.expectConsistent();
      EXPECT_EQ(parts.bits, seq[i]);
    }
  }
}

TEST(AggTree, RandomOperationsAgainstSequence) {
  std::mt19937 rng(4);
  CostMeter m;
  AggArena arena(kWidth, m);
  Mirror mirror{AggTree(arena), {}};
  for (int step = 0; step < 3000; ++step) {
    const std::size_t n = mirror.seq.size();
    const int op = static_cast<int>(rng() % 6);
    if (op <= 1 || n == 0) {
      std::size_t i = rng() % (n + 1);
      BitArray b = randomBits(rng);
      mirror.tree.treeInsert(i, b);
      mirror.seq.insert(mirror.seq.begin() + static_cast<std::ptrdiff_t>(i), b);
    } else if (op == 2) {
      std::size_t i = rng() % n;
      mirror.tree.treeDelete(i);
      mirror.seq.erase(mirror.seq.begin() + static_cast<std::ptrdiff_t>(i));
    } else if (op == 3) {
      std::size_t i = rng() % n, j = rng() % kWidth;
      bool b = rng() % 2;
      mirror.tree.bitSet(i, j, b);
      mirror.seq[i].set(j, b);
    } else if (op == 4) {
      std::size_t i = rng() % n;
      BitArray b = randomBits(rng, 0.3);
      mirror.tree.bulkSet(i, b);
      mirror.seq[i] = b;
    } else {
      std::vector<std::size_t> u;
      for (std::size_t i = 0; i < n; ++i)
        if (rng() % 3 == 0) u.push_back(i);
      std::size_t j = rng() % kWidth;
      bool b = rng() % 2;
      mirror.tree.dualBulkSet(u, j, b);
      for (std::size_t i : u) mirror.seq[i].set(j, b);
    }
    mirror.expectConsistent();
    if (HasFatalFailure()) FAIL() << "step " << step;
  }
  EXPECT_EQ(arena.liveVertices() >= mirror.seq.size(), true);
}

TEST(AggTree, NoVertexLeak) {
  CostMeter m;
  AggArena arena(kWidth, m);
  std::mt19937 rng(5);
  {
    std::vector<BitArray> seq;
    for (int i = 0; i < 100; ++i) seq.push_back(randomBits(rng));
    AggTree t = build(arena, seq);
    for (int k = 0; k < 60; ++k) t.treeDelete(rng() % t.leafCount());
  }
  EXPECT_EQ(arena.liveVertices(), 0u);
}

TEST(AggTree, BulkSetMatchesSequentialBitSets) {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    CostMeter m;
    AggArena arena(kWidth, m);
    std::vector<BitArray> seq;
    for (int i = 0; i < 40; ++i) seq.push_back(randomBits(rng));
    AggTree a = build(arena, seq), b = build(arena, seq);
    std::size_t i = rng() % 40;
    BitArray nb = randomBits(rng, 0.4);
    a.bulkSet(i, nb);
    for (std::size_t j = 0; j < kWidth; ++j) b.bitSet(i, j, nb.test(j));
    EXPECT_EQ(a.leafSequence(), b.leafSequence());
    EXPECT_EQ(a.rootBits(), b.rootBits());
    EXPECT_TRUE(checkAggTree(a).ok);
  }
}

TEST(AggTree, StructuralDepthIndependentOfSize) {
  std::uint64_t joinDepth = 0, splitDepth = 0;
  for (std::size_t n : {64, 256, 1024, 4096}) {
    CostMeter m;
    AggArena arena(kWidth, m);
    std::vector<BitArray> seq(n, BitArray(kWidth));
    AggTree t = build(arena, seq);
    m.reset();
    auto parts = AggTree::treeSplit(std::move(t), n / 3);
    const std::uint64_t s = m.depth();
    m.reset();
    AggTree::treeJoin(std::move(parts.left), std::move(parts.right));
    const std::uint64_t j = m.depth();
    if (joinDepth == 0) {
      joinDepth = j;
      splitDepth = s;
    }
    EXPECT_EQ(j, joinDepth) << n;
    EXPECT_EQ(s, splitDepth) << n;
  }
}
