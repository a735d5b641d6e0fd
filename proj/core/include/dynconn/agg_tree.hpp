#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dynconn/bit_array.hpp"
#include "dynconn/cost_model.hpp"

namespace dynconn {

using VertexId = std::int32_t;
inline constexpr VertexId kNoVertex = -1;
inline constexpr int kMinDegree = 2;
inline constexpr int kMaxDegree = 6;

struct AggVertex {
  int height = 0;
  int degree = 0;
  std::array<VertexId, kMaxDegree> child{};
  VertexId fst = kNoVertex;  // first leaf below
  VertexId lst = kNoVertex;  // last leaf below
  BitArray bits;
  // Leaves only: anc[h] is the ancestor at height h, anc[0] the leaf itself.
  std::vector<VertexId> anc;
  bool live = false;
};

/// Vertex storage shared by all aggregate trees of one width. Trees are
/// handles into the arena, so joins and splits relink vertices in place.
class AggArena {
 public:
  AggArena(std::size_t width, CostMeter& meter) : width_(width), meter_(&meter) {}
  AggArena(const AggArena&) = delete;
  AggArena& operator=(const AggArena&) = delete;

  std::size_t width() const { return width_; }
  CostMeter& meter() const { return *meter_; }
  const AggVertex& vertex(VertexId v) const { return vertices_[static_cast<std::size_t>(v)]; }
  std::size_t liveVertices() const { return live_; }

 private:
  friend class AggTree;

  AggVertex& at(VertexId v) { return vertices_[static_cast<std::size_t>(v)]; }
  VertexId allocate(int height);
  void release(VertexId v);

  std::size_t width_;
  CostMeter* meter_;
  std::vector<AggVertex> vertices_;
  std::vector<VertexId> free_;
  std::size_t live_ = 0;
  // Scratch state of one structural operation.
  std::vector<VertexId> override_;
  std::vector<VertexId> overrideTouched_;
  std::vector<char> dissolved_;
};

/// Weak (2,6)-tree over a sequence of bit arrays whose inner vertices hold
/// the bitwise OR of the leaves below them. Every structural change is a
/// fixed sequence of parallel rounds on the arena's meter.
class AggTree {
 public:
  explicit AggTree(AggArena& arena) : arena_(&arena) {}
  AggTree(AggTree&& other) noexcept;
  AggTree& operator=(AggTree&& other) noexcept;
  AggTree(const AggTree&) = delete;
  AggTree& operator=(const AggTree&) = delete;
  ~AggTree();

  static AggTree singleton(AggArena& arena, BitArray bits);

  AggArena& arena() const { return *arena_; }
  bool empty() const { return root_ == kNoVertex; }
  std::size_t leafCount() const { return leaves_.size(); }
  /// Height of the root; 0 for a single leaf, -1 for the empty tree.
  int treeHeight() const { return height_; }
  VertexId root() const { return root_; }
  VertexId leaf(std::size_t i) const;
  VertexId treeAnc(std::size_t i, int level) const;
  const BitArray& bitArray(VertexId v) const;
  const BitArray& leafBits(std::size_t i) const { return bitArray(leaf(i)); }
  /// OR over all leaves; an all-zero array for the empty tree.
  BitArray rootBits() const;

  void treeInsert(std::size_t i, BitArray bits);
  void treeDelete(std::size_t i);

  static AggTree treeJoin(AggTree left, AggTree right);

  struct SplitResult;
  /// Leaves before i, leaves after i, and the bit array of leaf i.
  static SplitResult treeSplit(AggTree tree, std::size_t i);

  void bitSet(std::size_t i, std::size_t j, bool b);
  void bulkSet(std::size_t i, const BitArray& bits);
  void dualBulkSet(std::span<const std::size_t> leaves, std::size_t j, bool b);

  std::vector<BitArray> leafSequence() const;
  const std::vector<VertexId>& leaves() const { return leaves_; }

 private:
  enum class Side { Right, Left };
  static AggTree attach(AggArena& arena, Side side, int lo, int top,
                        const std::vector<std::vector<VertexId>>& groups, std::vector<VertexId> leaves);
  void releaseAll();
  void checkPosition(std::size_t i) const;

  AggArena* arena_;
  VertexId root_ = kNoVertex;
  int height_ = -1;
  std::vector<VertexId> leaves_;
};

struct AggTree::SplitResult {
  AggTree left;
  AggTree right;
  BitArray bits;
};

}  // namespace dynconn
