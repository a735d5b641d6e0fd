#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "dynconn/chunk_store.hpp"
#include "dynconn/cost_model.hpp"

namespace dynconn {

struct Edge {
  NodeId u = -1;
  NodeId v = -1;
  Edge normalized() const { return u < v ? Edge{u, v} : Edge{v, u}; }
  friend bool operator==(const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }
};

struct ReplacementReport {
  enum class Kind { NonTreeDeleted, SplitNoReplacement, ReplacedBy };
  Kind kind = Kind::NonTreeDeleted;
  Edge edge;  // the replacement, for ReplacedBy

  static ReplacementReport nonTree() { return {Kind::NonTreeDeleted, {}}; }
  static ReplacementReport split() { return {Kind::SplitNoReplacement, {}}; }
  static ReplacementReport replacedBy(Edge e) { return {Kind::ReplacedBy, e}; }
};

/// Spanning forest of a graph with maximum degree 3, kept as chunked Euler
/// tours: each tree's tour is cut into chunks of at most K directed edges,
/// and each tour's chunks form one chunk array of the store.
class EulerForest {
 public:
  static constexpr int kMaxDegree = 3;
  // Fixed round schedules of the updates.
  static constexpr std::uint64_t kInsertRounds = 2048;
  static constexpr std::uint64_t kDeleteRounds = 4096;

  EulerForest(std::size_t nodeCapacity, CostMeter& meter);

  std::size_t capacity() const { return capacity_; }
  CostMeter& meter() const { return *meter_; }
  const ChunkStore& store() const { return store_; }

  void activateNode(NodeId v);
  void deactivateNode(NodeId v);
  bool isActive(NodeId v) const;

  void insertEdge(NodeId u, NodeId v);
  ReplacementReport deleteEdge(NodeId u, NodeId v);
  /// Like deleteEdge, but a tree-edge deletion reconnects through `hint`
  /// whenever that non-tree edge crosses the cut.
  ReplacementReport deleteEdgeWithHint(NodeId u, NodeId v, Edge hint);
  /// What deleteEdge would report, without changing the forest.
  ReplacementReport findReplacement(NodeId u, NodeId v);

  bool connected(NodeId u, NodeId v) const;
  std::size_t nComponents() const { return activeCount_ - treeEdges_; }
  bool treeEdge(NodeId u, NodeId v) const;
  bool hasEdge(NodeId u, NodeId v) const;
  int degree(NodeId v) const;
  std::vector<NodeId> neighbors(NodeId v) const;
  std::size_t activeCount() const { return activeCount_; }
  std::size_t treeEdgeCount() const { return treeEdges_; }

  /// Replacement candidates with a lower class are preferred.
  void setPriority(std::function<int(NodeId, NodeId)> priority) { priority_ = std::move(priority); }

  /// Chunk array of v's tree, or kNoArray for a node without tree edges.
  ArrayId treeArray(NodeId v) const;
  /// Location of the directed tree edge (from, to).
  std::pair<ChunkId, std::size_t> locate(NodeId from, NodeId to) const;
  /// Link vector v would get from a full rescan of its chunk.
  BitArray computeLinks(ChunkId c) const;

 private:
  struct Loc {
    ChunkId chunk = kNoChunk;
    std::size_t offset = 0;
  };
  struct Node {
    bool active = false;
    std::array<NodeId, kMaxDegree> nbr{-1, -1, -1};
    std::array<bool, kMaxDegree> tree{};
    std::array<Loc, kMaxDegree> out{};
  };
  // Position of a directed edge in tour order.
  struct TourPos {
    std::size_t chunkPos;
    std::size_t offset;
    auto operator<=>(const TourPos&) const = default;
  };
  struct Cut {
    ArrayId array;
    TourPos first, second;
    TourEdge firstEdge;
  };
  struct Candidate {
    NodeId inside, outside;
    int cls;
    TourPos where;
  };

  Node& node(NodeId v);
  const Node& node(NodeId v) const;
  int slotOf(NodeId v, NodeId w) const;
  Loc& loc(const TourEdge& e);
  void relocate(ChunkId c);
  std::vector<ChunkId> appearances(NodeId v) const;
  TourPos posOf(NodeId from, NodeId to) const;
  Cut cutOf(NodeId u, NodeId v) const;
  bool inside(const Cut& cut, NodeId w) const;
  void scanChunk(const Cut& cut, ChunkId c, std::optional<ChunkId> partner, std::vector<Candidate>& out) const;
  std::optional<Edge> searchReplacement(const Cut& cut);
  Edge pick(std::vector<Candidate>& candidates);

  void addNeighbor(NodeId a, NodeId b, bool isTree);
  void removeNeighbor(NodeId a, NodeId b);
  void linkNonTree(NodeId u, NodeId v);
  void unlinkNonTree(NodeId u, NodeId v);
  bool stillLinked(ChunkId a, ChunkId b) const;

  ChunkId splitChunkAt(ChunkId c, std::size_t offset);
  void dropChunk(ChunkId c);
  void repair(ArrayId a);
  void finish();
  void mergeTrees(NodeId u, NodeId v);
  void cutTree(NodeId u, NodeId v);
  ReplacementReport deleteNonTreeEdge(NodeId u, NodeId v);
  ReplacementReport deleteTreeEdge(NodeId u, NodeId v, std::optional<Edge> replacement);

  CostMeter* meter_;
  std::size_t capacity_;
  std::vector<Node> nodes_;
  ChunkStore store_;
  std::size_t activeCount_ = 0;
  std::size_t treeEdges_ = 0;
  std::function<int(NodeId, NodeId)> priority_;
  std::set<ChunkId> modified_;
  mutable std::vector<std::uint32_t> stamp_;
  mutable std::uint32_t stampValue_ = 0;
};

/// K = max(2, ceil(sqrt(3n))) for node capacity n.
std::size_t chunkCapacityFor(std::size_t nodeCapacity);
/// J = 4 * ceil(3n / K) + 8.
std::size_t slotCountFor(std::size_t nodeCapacity);

}  // namespace dynconn
