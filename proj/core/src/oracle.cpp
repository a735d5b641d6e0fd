#include "dynconn/oracle.hpp"

#include <queue>

#include "dynconn/cost_model.hpp"

namespace dynconn {

void SimpleGraph::activate(NodeId v) {
  if (isActive(v)) throw PreconditionError("node already active");
  active_[static_cast<std::size_t>(v)] = 1;
}

void SimpleGraph::deactivate(NodeId v) {
  if (!isActive(v)) throw PreconditionError("node not active");
  if (!neighbors(v).empty()) throw PreconditionError("deactivated node must be isolated");
  active_[static_cast<std::size_t>(v)] = 0;
}

std::size_t SimpleGraph::activeCount() const {
  std::size_t c = 0;
  for (char a : active_) c += a != 0;
  return c;
}

void SimpleGraph::addEdge(NodeId u, NodeId v) {
  if (u == v) throw PreconditionError("self-loop");
  if (!isActive(u) || !isActive(v)) throw PreconditionError("node not active");
  if (hasEdge(u, v)) throw PreconditionError("edge already present");
  adj_[static_cast<std::size_t>(u)].insert(v);
  adj_[static_cast<std::size_t>(v)].insert(u);
}

void SimpleGraph::removeEdge(NodeId u, NodeId v) {
  if (!hasEdge(u, v)) throw PreconditionError("edge absent");
  adj_[static_cast<std::size_t>(u)].erase(v);
  adj_[static_cast<std::size_t>(v)].erase(u);
}

bool SimpleGraph::hasEdge(NodeId u, NodeId v) const { return neighbors(u).count(v) > 0; }

std::size_t SimpleGraph::edgeCount() const {
  std::size_t c = 0;
  for (const auto& s : adj_) c += s.size();
  return c / 2;
}

std::vector<int> bfLabels(const SimpleGraph& g) {
  std::vector<int> label(g.capacity(), -1);
  int next = 0;
  for (std::size_t s = 0; s < g.capacity(); ++s) {
    if (!g.isActive(static_cast<NodeId>(s)) || label[s] >= 0) continue;
    std::queue<NodeId> q;
    q.push(static_cast<NodeId>(s));
    label[s] = next;
    while (!q.empty()) {
      NodeId x = q.front();
      q.pop();
      for (NodeId y : g.neighbors(x))
        if (label[static_cast<std::size_t>(y)] < 0) {
          label[static_cast<std::size_t>(y)] = next;
          q.push(y);
        }
    }
    ++next;
  }
  return label;
}

bool bfConnected(const SimpleGraph& g, NodeId u, NodeId v) {
  if (!g.isActive(u) || !g.isActive(v)) throw PreconditionError("node not active");
  auto label = bfLabels(g);
  return label[static_cast<std::size_t>(u)] == label[static_cast<std::size_t>(v)];
}

std::size_t bfComponents(const SimpleGraph& g) {
  int most = -1;
  for (int l : bfLabels(g)) most = std::max(most, l);
  return static_cast<std::size_t>(most + 1);
}

bool bfBipartite(const SimpleGraph& g) {
  std::vector<int> color(g.capacity(), -1);
  for (std::size_t s = 0; s < g.capacity(); ++s) {
    if (!g.isActive(static_cast<NodeId>(s)) || color[s] >= 0) continue;
    std::queue<NodeId> q;
    q.push(static_cast<NodeId>(s));
    color[s] = 0;
    while (!q.empty()) {
      NodeId x = q.front();
      q.pop();
      for (NodeId y : g.neighbors(x)) {
        int& cy = color[static_cast<std::size_t>(y)];
        if (cy < 0) {
          cy = 1 - color[static_cast<std::size_t>(x)];
          q.push(y);
        } else if (cy == color[static_cast<std::size_t>(x)]) {
          return false;
        }
      }
    }
  }
  return true;
}

std::size_t bfIsolated(const SimpleGraph& g) {
  std::size_t c = 0;
  for (std::size_t v = 0; v < g.capacity(); ++v)
    if (g.isActive(static_cast<NodeId>(v)) && g.degree(static_cast<NodeId>(v)) == 0) ++c;
  return c;
}

SimpleGraph distance2Graph(const SimpleGraph& g) {
  SimpleGraph d(g.capacity());
  for (std::size_t v = 0; v < g.capacity(); ++v)
    if (g.isActive(static_cast<NodeId>(v))) d.activate(static_cast<NodeId>(v));
  for (std::size_t y = 0; y < g.capacity(); ++y) {
    const auto& nb = g.neighbors(static_cast<NodeId>(y));
    for (NodeId x : nb)
      for (NodeId z : nb)
        if (x < z && !d.hasEdge(x, z)) d.addEdge(x, z);
  }
  return d;
}

}  // namespace dynconn
