#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dynconn/bipartite.hpp"
#include "dynconn/conn_general.hpp"

namespace dynconn {

enum class Mode { Connectivity, Bipartiteness };

/// Implicit balanced halving of the node ids [0, n): the children of (l, k)
/// are (l+1, 2k) and (l+1, 2k+1), the first taking the larger half.
class PartitionTree {
 public:
  explicit PartitionTree(std::size_t n);

  std::size_t size() const { return n_; }
  /// Leaf level; every part on it holds at most one node.
  int depth() const { return depth_; }
  /// Node-id interval [first, second) of part (level, k); empty if k is out of range.
  std::pair<NodeId, NodeId> interval(int level, std::int64_t k) const;
  std::int64_t indexOf(NodeId v, int level) const;

 private:
  std::size_t n_;
  int depth_ = 0;
  std::vector<std::vector<std::pair<NodeId, NodeId>>> parts_;
  std::vector<std::int32_t> index_;
};

struct SparsKey {
  int level = 0;
  std::int64_t k1 = 0, k2 = 0;  // k1 <= k2
  SparsKey parent() const { return SparsKey{level - 1, k1 / 2, k2 / 2}; }
  auto operator<=>(const SparsKey&) const = default;
};

struct SparsNode {
  SparsKey key;
  std::size_t vertexCount = 0;
  std::set<std::pair<NodeId, NodeId>> baseEdges;
  std::unique_ptr<ConnGeneral> conn;
  std::unique_ptr<BipartiteGeneral> bip;
  bool ownBit = true;
  bool subtreeFlag = true;
  // Present edges of the graph whose key path runs through this node.
  std::size_t pathEdges = 0;
  std::unordered_map<NodeId, NodeId> local;
  std::vector<NodeId> global;
  std::vector<std::size_t> baseDegree;
  std::vector<NodeId> freeLocal;
};

/// Largest per-call inner changes seen by any node structure since creation.
struct TranslationPeaks {
  InnerOpCounts connInsert, connDelete;
  int gadgetEndpoint = 0;
  int gadgetTotal = 0;
  int distance2 = 0;
  // Counts of the distance-2 structures, inserts and deletes together.
  InnerOpCounts distance2Counts;
};

/// Dynamic graph facade: a lazily materialized sparsification tree whose
/// nodes keep base graphs, their spanning forests and, in bipartiteness
/// mode, bipartiteness flags.
class SparsTree {
 public:
  SparsTree(std::size_t n, Mode mode, CostMeter& meter);

  std::size_t size() const { return partition_.size(); }
  Mode mode() const { return mode_; }
  CostMeter& meter() const { return *meter_; }
  const PartitionTree& partition() const { return partition_; }
  std::uint64_t updateRounds() const;
  static constexpr std::uint64_t kQueryRounds = 4;

  void activateNode(NodeId v);
  void deactivateNode(NodeId v);
  bool isActive(NodeId v) const;

  void insertEdge(NodeId x, NodeId y);
  void deleteEdge(NodeId x, NodeId y);

  bool connected(NodeId u, NodeId v) const;
  std::size_t nComponents() const;
  bool treeEdge(NodeId u, NodeId v) const;
  bool isBipartite() const;

  bool hasEdge(NodeId u, NodeId v) const;
  std::size_t degree(NodeId v) const;
  std::size_t edgeCount() const { return edges_.size(); }
  std::size_t activeCount() const { return activeCount_; }

  /// Keys from the leaf of (x, y) up to the root.
  std::vector<SparsKey> keyPath(NodeId x, NodeId y) const;
  SparsKey rootKey() const { return SparsKey{0, 0, 0}; }
  const SparsNode* find(const SparsKey& key) const;
  const std::map<SparsKey, SparsNode>& nodes() const { return nodes_; }
  std::vector<SparsKey> children(const SparsKey& key) const;
  /// Levels of the last update's path whose base graph changed, leaf first.
  const std::vector<int>& lastTouchedLevels() const { return touched_; }
  const TranslationPeaks& translationPeaks() const { return peaks_; }

 private:
  static std::uint64_t edgeKey(NodeId u, NodeId v);
  void checkNode(NodeId v) const;
  SparsNode& materialize(const SparsKey& key);
  NodeId localOf(const SparsNode& node, NodeId v) const;
  NodeId attach(SparsNode& node, NodeId v);
  void detach(SparsNode& node, NodeId v);
  void baseInsert(SparsNode& node, NodeId x, NodeId y);
  ReplacementReport baseDelete(SparsNode& node, NodeId x, NodeId y, const Edge* hint);
  bool probeConnected(const SparsNode& node, NodeId x, NodeId y) const;
  bool probeTree(const SparsNode& node, NodeId x, NodeId y) const;
  void recordPeaks(const SparsNode& node, bool inserted);
  void refreshFlags(const std::vector<SparsNode*>& path);
  void release(const std::vector<SparsKey>& path);

  PartitionTree partition_;
  Mode mode_;
  CostMeter* meter_;
  std::map<SparsKey, SparsNode> nodes_;
  std::vector<char> active_;
  std::vector<std::size_t> degree_;
  std::unordered_set<std::uint64_t> edges_;
  std::size_t activeCount_ = 0;
  std::vector<int> touched_;
  TranslationPeaks peaks_;
};

}  // namespace dynconn
