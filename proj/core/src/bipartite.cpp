#include "dynconn/bipartite.hpp"

#include <algorithm>

namespace dynconn {

std::uint64_t Distance2Witness::key(NodeId x, NodeId z) {
  const auto lo = static_cast<std::uint32_t>(std::min(x, z)), hi = static_cast<std::uint32_t>(std::max(x, z));
  return (std::uint64_t{lo} << 32) | hi;
}

int Distance2Witness::count(NodeId x, NodeId z) const {
  auto it = counts_.find(key(x, z));
  return it == counts_.end() ? 0 : it->second;
}

int Distance2Witness::bump(NodeId x, NodeId z, int delta) {
  if (x == z) throw ContractViolation("distance-2 witness for a self pair");
  auto it = counts_.try_emplace(key(x, z), 0).first;
  it->second += delta;
  if (it->second < 0) throw ContractViolation("negative distance-2 witness count");
  const int now = it->second;
  if (now == 0) counts_.erase(it);
  return now;
}

BipartiteBounded::BipartiteBounded(std::size_t nodeCapacity, CostMeter& meter)
    : graph_(nodeCapacity, meter), p2_(nodeCapacity, 3 * nodeCapacity, meter) {}

void BipartiteBounded::activateNode(NodeId v) {
  graph_.activateNode(v);
  p2_.activateNode(v);
  ++isolated_;
}

void BipartiteBounded::deactivateNode(NodeId v) {
  graph_.deactivateNode(v);
  p2_.deactivateNode(v);
  --isolated_;
}

// Each neighbour y of v pairs with u, each neighbour y of u pairs with v;
// the edge (u,v) itself only yields the skipped self pairs.
void BipartiteBounded::bumpAround(NodeId u, NodeId v, int delta) {
  const auto nu = graph_.neighbors(u), nv = graph_.neighbors(v);
  graph_.meter().parallelUniform(nu.size() + nv.size(), 4);
  auto apply = [&](NodeId x, NodeId z) {
    if (x == z) return;
    const int now = witness_.bump(x, z, delta);
    if (delta > 0 && now == 1) {
      p2_.insertEdge(x, z);
      ++lastChanges_;
    } else if (delta < 0 && now == 0) {
      p2_.deleteEdge(x, z);
      ++lastChanges_;
    }
  };
  for (NodeId y : nv) apply(u, y);
  for (NodeId y : nu) apply(v, y);
}

void BipartiteBounded::finishChanges() {
  peakChanges_ = std::max(peakChanges_, lastChanges_);
  if (lastChanges_ > kDistance2Limit) throw ContractViolation("too many distance-2 changes for one edge change");
}

void BipartiteBounded::insertEdge(NodeId u, NodeId v) {
  graph_.meter().scheduled(kApplyRounds, [&] {
    const int du = graph_.isActive(u) ? graph_.degree(u) : -1;
    const int dv = graph_.isActive(v) ? graph_.degree(v) : -1;
    graph_.insertEdge(u, v);
    lastChanges_ = 0;
    isolated_ -= (du == 0) + (dv == 0);
    bumpAround(u, v, 1);
    finishChanges();
  });
}

void BipartiteBounded::deleteEdge(NodeId u, NodeId v) {
  graph_.meter().scheduled(kApplyRounds, [&] {
    graph_.deleteEdge(u, v);
    lastChanges_ = 0;
    bumpAround(u, v, -1);
    isolated_ += (graph_.degree(u) == 0) + (graph_.degree(v) == 0);
    finishChanges();
  });
}

bool BipartiteBounded::isBipartite() const {
  return p2_.nComponents() == 2 * graph_.nComponents() - isolated_;
}

BipartiteGeneral::BipartiteGeneral(std::size_t hostCapacity, std::size_t edgeCapacity, CostMeter& meter)
    : hostCapacity_(hostCapacity), edgeCapacity_(edgeCapacity), inner_(std::max<std::size_t>(4 * edgeCapacity, 2), meter) {}

bool BipartiteGeneral::isActive(NodeId u) const {
  if (u < 0 || static_cast<std::size_t>(u) >= hostCapacity_) throw PreconditionError("node id out of range");
  return static_cast<std::size_t>(u) < active_.size() && active_[static_cast<std::size_t>(u)] != 0;
}

void BipartiteGeneral::activateNode(NodeId u) {
  if (isActive(u)) throw PreconditionError("node already active");
  const auto i = static_cast<std::size_t>(u);
  if (i >= active_.size()) {
    active_.resize(i + 1, 0);
    adj_.resize(i + 1);
    head_.resize(i + 1, -1);
  }
  active_[i] = 1;
}

void BipartiteGeneral::deactivateNode(NodeId u) {
  if (!isActive(u)) throw PreconditionError("node not active");
  if (!adj_[static_cast<std::size_t>(u)].empty()) throw PreconditionError("deactivated node must be isolated");
  active_[static_cast<std::size_t>(u)] = 0;
}

bool BipartiteGeneral::hasEdge(NodeId u, NodeId v) const {
  return isActive(u) && isActive(v) && adj_[static_cast<std::size_t>(u)].count(v) > 0;
}

std::size_t BipartiteGeneral::degree(NodeId u) const {
  if (!isActive(u)) throw PreconditionError("node not active");
  return adj_[static_cast<std::size_t>(u)].size();
}

NodeId BipartiteGeneral::attachNode(NodeId u, NodeId v) const {
  if (!hasEdge(u, v)) throw PreconditionError("edge absent");
  return adj_[static_cast<std::size_t>(u)].at(v);
}

std::vector<NodeId> BipartiteGeneral::gadget(NodeId u) const {
  std::vector<NodeId> out;
  if (!isActive(u)) return out;
  const NodeId h = head_[static_cast<std::size_t>(u)];
  if (h < 0) return out;
  NodeId g = h;
  do {
    out.push_back(g);
    out.push_back(pair_[static_cast<std::size_t>(g)].prime);
    g = pair_[static_cast<std::size_t>(g)].next;
  } while (g != h);
  return out;
}

NodeId BipartiteGeneral::allocate() {
  NodeId g;
  if (!free_.empty()) {
    g = free_.back();
    free_.pop_back();
  } else {
    if (pair_.size() >= inner_.capacity()) throw PreconditionError("gadget capacity exhausted");
    g = static_cast<NodeId>(pair_.size());
    pair_.emplace_back();
  }
  inner_.activateNode(g);
  return g;
}

void BipartiteGeneral::release(NodeId g) {
  inner_.deactivateNode(g);
  pair_[static_cast<std::size_t>(g)] = Pair{};
  free_.push_back(g);
}

void BipartiteGeneral::innerInsert(NodeId a, NodeId b, int& changes) {
  inner_.insertEdge(a, b);
  ++changes;
}

void BipartiteGeneral::innerDelete(NodeId a, NodeId b, int& changes) {
  inner_.deleteEdge(a, b);
  ++changes;
}

// Grows u's cycle by the pair (x, x') after its last pair; returns the
// number of inner edge changes.
int BipartiteGeneral::splice(NodeId u, NodeId v) {
  int changes = 0;
  auto& adj = adj_[static_cast<std::size_t>(u)];
  NodeId& head = head_[static_cast<std::size_t>(u)];
  const NodeId x = allocate(), xp = allocate();
  auto& px = pair_[static_cast<std::size_t>(x)];
  px.prime = xp;
  inner_.graph().meter().charge(6);
  if (adj.empty()) {
    innerInsert(x, xp, changes);
    px.next = px.prev = x;
    head = x;
  } else {
    const NodeId a = pair_[static_cast<std::size_t>(head)].prev;
    const NodeId ap = pair_[static_cast<std::size_t>(a)].prime;
    const NodeId b = head;
    if (adj.size() >= 2) innerDelete(ap, b, changes);
    innerInsert(ap, x, changes);
    innerInsert(x, xp, changes);
    innerInsert(xp, b, changes);
    px.prev = a;
    px.next = b;
    pair_[static_cast<std::size_t>(a)].next = x;
    pair_[static_cast<std::size_t>(b)].prev = x;
  }
  adj.emplace(v, x);
  return changes;
}

// Removes the pair of n(u,v) from u's cycle; the cross edge is already gone.
int BipartiteGeneral::unsplice(NodeId u, NodeId v) {
  int changes = 0;
  auto& adj = adj_[static_cast<std::size_t>(u)];
  NodeId& head = head_[static_cast<std::size_t>(u)];
  const std::size_t d = adj.size();
  const NodeId x = adj.at(v);
  adj.erase(v);
  const Pair px = pair_[static_cast<std::size_t>(x)];
  const NodeId xp = px.prime;
  inner_.graph().meter().charge(6);
  if (d == 1) {
    innerDelete(x, xp, changes);
    head = -1;
  } else {
    const NodeId p = px.prev, b = px.next;
    const NodeId pp = pair_[static_cast<std::size_t>(p)].prime;
    innerDelete(pp, x, changes);
    innerDelete(x, xp, changes);
    innerDelete(xp, b, changes);
    if (d >= 3) innerInsert(pp, b, changes);
    pair_[static_cast<std::size_t>(p)].next = b;
    pair_[static_cast<std::size_t>(b)].prev = p;
    if (head == x) head = b;
  }
  release(x);
  release(xp);
  return changes;
}

void BipartiteGeneral::record(int gadgetU, int gadgetV) {
  lastTotal_ = gadgetU + gadgetV - 1;
  peakTotal_ = std::max(peakTotal_, lastTotal_);
  peakGadget_ = std::max({peakGadget_, gadgetU, gadgetV});
  if (gadgetU > kGadgetLimit || gadgetV > kGadgetLimit || lastTotal_ > kHostChangeLimit)
    throw ContractViolation("host operation exceeded its gadget change budget");
}

void BipartiteGeneral::insertEdge(NodeId u, NodeId v) {
  inner_.graph().meter().scheduled(kApplyRounds, [&] {
    if (u == v) throw PreconditionError("self-loop");
    if (!isActive(u) || !isActive(v)) throw PreconditionError("node not active");
    if (hasEdge(u, v)) throw PreconditionError("edge already present");
    if (edgeCount_ >= edgeCapacity_) throw PreconditionError("edge capacity exhausted");
    const int su = splice(u, v), sv = splice(v, u);
    int cross = 0;
    innerInsert(attachNode(u, v), attachNode(v, u), cross);
    ++edgeCount_;
    record(su + cross, sv + cross);
  });
}

void BipartiteGeneral::deleteEdge(NodeId u, NodeId v) {
  inner_.graph().meter().scheduled(kApplyRounds, [&] {
    if (!hasEdge(u, v)) throw PreconditionError("edge absent");
    int cross = 0;
    innerDelete(attachNode(u, v), attachNode(v, u), cross);
    const int su = unsplice(u, v), sv = unsplice(v, u);
    --edgeCount_;
    record(su + cross, sv + cross);
  });
}

}  // namespace dynconn
