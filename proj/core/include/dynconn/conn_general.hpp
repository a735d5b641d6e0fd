#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dynconn/euler_forest.hpp"

namespace dynconn {

/// Inner operations issued for one host operation.
struct InnerOpCounts {
  int nodeAdds = 0;
  int nodeRemovals = 0;
  int edgeInserts = 0;
  int edgeDeletes = 0;

  void raiseTo(const InnerOpCounts& o);
  friend bool operator==(const InnerOpCounts&, const InnerOpCounts&) = default;
};

/// Connectivity and spanning forest for graphs of unbounded degree.
///
/// A host node of degree d is represented by d gadget nodes of an inner
/// degree-3 forest, joined in a cycle (one edge for d = 2, none for d <= 1);
/// host edge (u,v) becomes the cross edge between n(u,v) and n(v,u). Each
/// cycle keeps d-1 of its edges in the inner spanning forest, so the host
/// tree edges are exactly the inner cross tree edges. Gadget edits delete
/// before they insert, since every gadget node already has degree 3.
class ConnGeneral {
 public:
  static constexpr InnerOpCounts kInsertLimit{2, 0, 5, 2};
  static constexpr InnerOpCounts kDeleteLimit{0, 2, 2, 5};
  static constexpr std::uint64_t kInsertRounds = 5 * EulerForest::kInsertRounds + 2 * EulerForest::kDeleteRounds + 64;
  static constexpr std::uint64_t kDeleteRounds = 2 * EulerForest::kInsertRounds + 5 * EulerForest::kDeleteRounds + 64;

  ConnGeneral(std::size_t hostCapacity, std::size_t edgeCapacity, CostMeter& meter);
  ConnGeneral(const ConnGeneral&) = delete;
  ConnGeneral& operator=(const ConnGeneral&) = delete;

  std::size_t capacity() const { return hostCapacity_; }
  std::size_t edgeCapacity() const { return edgeCapacity_; }
  CostMeter& meter() const { return inner_.meter(); }

  void activateNode(NodeId u);
  void deactivateNode(NodeId u);
  bool isActive(NodeId u) const;

  void insertEdge(NodeId u, NodeId v);
  ReplacementReport deleteEdge(NodeId u, NodeId v);
  ReplacementReport deleteEdgeWithHint(NodeId u, NodeId v, Edge hint);
  ReplacementReport findReplacement(NodeId u, NodeId v);

  bool connected(NodeId u, NodeId v) const;
  std::size_t nComponents() const { return inner_.nComponents(); }
  bool treeEdge(NodeId u, NodeId v) const;
  bool hasEdge(NodeId u, NodeId v) const;
  std::size_t degree(NodeId u) const;
  std::vector<NodeId> neighbors(NodeId u) const;
  std::size_t edgeCount() const { return edgeCount_; }
  std::size_t activeCount() const { return activeCount_; }
  std::size_t isolatedCount() const { return isolated_; }

  const InnerOpCounts& lastCounts() const { return last_; }
  const InnerOpCounts& peakCounts() const { return peak_; }

  const EulerForest& inner() const { return inner_; }
  /// Gadget nodes of u in cycle order.
  std::vector<NodeId> gadget(NodeId u) const;
  NodeId gadgetNode(NodeId u, NodeId v) const;
  NodeId hostOf(NodeId g) const { return owner_.at(static_cast<std::size_t>(g)); }

 private:
  NodeId allocate(NodeId owner);
  void release(NodeId g);
  void innerInsert(NodeId a, NodeId b);
  void innerDelete(NodeId a, NodeId b, const Edge* hint = nullptr);
  NodeId splice(NodeId u, NodeId v);
  void unsplice(NodeId u, NodeId v);
  NodeId gapOf(NodeId u) const;
  Edge toHost(Edge inner) const;
  ReplacementReport translate(ReplacementReport r) const;
  void checkEdge(NodeId u, NodeId v) const;
  void begin();
  void commit(const InnerOpCounts& limit);

  std::size_t hostCapacity_;
  std::size_t edgeCapacity_;
  EulerForest inner_;
  std::vector<NodeId> head_;
  std::vector<NodeId> gap_;
  std::vector<std::unordered_map<NodeId, NodeId>> nbr_;
  std::vector<NodeId> owner_, next_, prev_;
  std::vector<NodeId> free_;
  std::size_t edgeCount_ = 0;
  std::size_t activeCount_ = 0;
  std::size_t isolated_ = 0;
  InnerOpCounts last_, peak_;
};

}  // namespace dynconn
