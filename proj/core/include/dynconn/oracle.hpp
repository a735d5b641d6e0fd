#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "dynconn/chunk_store.hpp"

namespace dynconn {

/// Plain adjacency-set graph used as ground truth.
class SimpleGraph {
 public:
  explicit SimpleGraph(std::size_t capacity = 0) : adj_(capacity), active_(capacity, 0) {}

  std::size_t capacity() const { return adj_.size(); }
  void activate(NodeId v);
  void deactivate(NodeId v);
  bool isActive(NodeId v) const { return active_.at(static_cast<std::size_t>(v)) != 0; }
  std::size_t activeCount() const;

  void addEdge(NodeId u, NodeId v);
  void removeEdge(NodeId u, NodeId v);
  bool hasEdge(NodeId u, NodeId v) const;
  const std::set<NodeId>& neighbors(NodeId v) const { return adj_.at(static_cast<std::size_t>(v)); }
  std::size_t degree(NodeId v) const { return neighbors(v).size(); }
  std::size_t edgeCount() const;

 private:
  std::vector<std::set<NodeId>> adj_;
  std::vector<char> active_;
};

bool bfConnected(const SimpleGraph& g, NodeId u, NodeId v);
/// Connected components among active nodes.
std::size_t bfComponents(const SimpleGraph& g);
bool bfBipartite(const SimpleGraph& g);
/// Active nodes of degree 0.
std::size_t bfIsolated(const SimpleGraph& g);
/// Component label per node (-1 for inactive nodes).
std::vector<int> bfLabels(const SimpleGraph& g);
/// Pairs {x, z}, x != z, joined by a path of exactly two edges; same active set.
SimpleGraph distance2Graph(const SimpleGraph& g);

}  // namespace dynconn
