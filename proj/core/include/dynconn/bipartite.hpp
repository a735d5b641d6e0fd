#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dynconn/conn_general.hpp"
#include "dynconn/euler_forest.hpp"

namespace dynconn {

/// Number of length-2 paths x - y - z (x != z) per unordered pair {x, z}.
class Distance2Witness {
 public:
  int count(NodeId x, NodeId z) const;
  /// Returns the count after the change.
  int bump(NodeId x, NodeId z, int delta);
  const std::unordered_map<std::uint64_t, int>& raw() const { return counts_; }
  static std::uint64_t key(NodeId x, NodeId z);

 private:
  std::unordered_map<std::uint64_t, int> counts_;
};

/// Bipartiteness of a graph with maximum degree 3, read off the component
/// counts of the graph and of its distance-2 graph.
class BipartiteBounded {
 public:
  static constexpr int kDistance2Limit = 6;
  static constexpr std::uint64_t kApplyRounds =
      EulerForest::kDeleteRounds + kDistance2Limit * ConnGeneral::kDeleteRounds + 64;

  BipartiteBounded(std::size_t nodeCapacity, CostMeter& meter);

  std::size_t capacity() const { return graph_.capacity(); }
  void activateNode(NodeId v);
  void deactivateNode(NodeId v);
  bool isActive(NodeId v) const { return graph_.isActive(v); }

  void insertEdge(NodeId u, NodeId v);
  void deleteEdge(NodeId u, NodeId v);
  bool isBipartite() const;

  const EulerForest& graph() const { return graph_; }
  const ConnGeneral& distance2() const { return p2_; }
  const Distance2Witness& witnesses() const { return witness_; }
  std::size_t isolatedCount() const { return isolated_; }
  int lastDistance2Changes() const { return lastChanges_; }
  int peakDistance2Changes() const { return peakChanges_; }

 private:
  void bumpAround(NodeId u, NodeId v, int delta);
  void finishChanges();

  EulerForest graph_;
  ConnGeneral p2_;
  Distance2Witness witness_;
  std::size_t isolated_ = 0;
  int lastChanges_ = 0;
  int peakChanges_ = 0;
};

/// Bipartiteness of a graph of unbounded degree. A host node of degree d is
/// replaced by the even cycle u1 u1' ... ud ud' of an inner degree-3 graph,
/// and host edges attach at the unprimed nodes.
class BipartiteGeneral {
 public:
  // Inner edge changes touching one endpoint's gadget, and in total.
  static constexpr int kGadgetLimit = 5;
  static constexpr int kHostChangeLimit = 9;
  static constexpr std::uint64_t kApplyRounds = kHostChangeLimit * BipartiteBounded::kApplyRounds + 64;

  BipartiteGeneral(std::size_t hostCapacity, std::size_t edgeCapacity, CostMeter& meter);

  std::size_t capacity() const { return hostCapacity_; }
  std::size_t edgeCapacity() const { return edgeCapacity_; }
  void activateNode(NodeId u);
  void deactivateNode(NodeId u);
  bool isActive(NodeId u) const;

  void insertEdge(NodeId u, NodeId v);
  void deleteEdge(NodeId u, NodeId v);
  bool isBipartite() const { return inner_.isBipartite(); }

  bool hasEdge(NodeId u, NodeId v) const;
  std::size_t degree(NodeId u) const;
  std::size_t edgeCount() const { return edgeCount_; }
  const BipartiteBounded& inner() const { return inner_; }
  /// Gadget cycle of u in order u1, u1', u2, ...
  std::vector<NodeId> gadget(NodeId u) const;
  NodeId attachNode(NodeId u, NodeId v) const;
  int lastInnerChanges() const { return lastTotal_; }
  int peakInnerChanges() const { return peakTotal_; }
  int peakGadgetChanges() const { return peakGadget_; }

 private:
  struct Pair {
    NodeId prime = -1;
    NodeId next = -1;
    NodeId prev = -1;
  };
  NodeId allocate();
  void release(NodeId g);
  int splice(NodeId u, NodeId v);
  int unsplice(NodeId u, NodeId v);
  void innerInsert(NodeId a, NodeId b, int& changes);
  void innerDelete(NodeId a, NodeId b, int& changes);
  void record(int gadgetU, int gadgetV);

  std::size_t hostCapacity_;
  std::size_t edgeCapacity_;
  BipartiteBounded inner_;
  std::vector<char> active_;
  std::vector<std::unordered_map<NodeId, NodeId>> adj_;
  std::vector<NodeId> head_;
  std::vector<Pair> pair_;
  std::vector<NodeId> free_;
  std::size_t edgeCount_ = 0;
  int lastTotal_ = 0, peakTotal_ = 0, peakGadget_ = 0;
};

}  // namespace dynconn
