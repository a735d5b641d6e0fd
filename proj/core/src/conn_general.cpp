#include "dynconn/conn_general.hpp"

#include <algorithm>

namespace dynconn {

void InnerOpCounts::raiseTo(const InnerOpCounts& o) {
  nodeAdds = std::max(nodeAdds, o.nodeAdds);
  nodeRemovals = std::max(nodeRemovals, o.nodeRemovals);
  edgeInserts = std::max(edgeInserts, o.edgeInserts);
  edgeDeletes = std::max(edgeDeletes, o.edgeDeletes);
}

ConnGeneral::ConnGeneral(std::size_t hostCapacity, std::size_t edgeCapacity, CostMeter& meter)
    : hostCapacity_(hostCapacity),
      edgeCapacity_(edgeCapacity),
      inner_(2 * edgeCapacity + std::max<std::size_t>(hostCapacity, 1), meter) {
  if (hostCapacity == 0) throw PreconditionError("host capacity must be positive");
}

bool ConnGeneral::isActive(NodeId u) const {
  if (u < 0 || static_cast<std::size_t>(u) >= hostCapacity_) throw PreconditionError("node id out of range");
  return static_cast<std::size_t>(u) < head_.size() && head_[static_cast<std::size_t>(u)] >= 0;
}

// Gadget ids are handed out densely so that storage follows actual use.
NodeId ConnGeneral::allocate(NodeId owner) {
  NodeId g;
  if (!free_.empty()) {
    g = free_.back();
    free_.pop_back();
  } else {
    if (owner_.size() >= inner_.capacity()) throw PreconditionError("gadget capacity exhausted");
    g = static_cast<NodeId>(owner_.size());
    owner_.push_back(-1);
    next_.push_back(-1);
    prev_.push_back(-1);
  }
  owner_[static_cast<std::size_t>(g)] = owner;
  next_[static_cast<std::size_t>(g)] = prev_[static_cast<std::size_t>(g)] = g;
  inner_.activateNode(g);
  meter().charge(2);
  return g;
}

void ConnGeneral::release(NodeId g) {
  inner_.deactivateNode(g);
  owner_[static_cast<std::size_t>(g)] = next_[static_cast<std::size_t>(g)] = prev_[static_cast<std::size_t>(g)] = -1;
  free_.push_back(g);
  meter().charge(2);
}

void ConnGeneral::activateNode(NodeId u) {
  if (isActive(u)) throw PreconditionError("node already active");
  const auto i = static_cast<std::size_t>(u);
  if (i >= head_.size()) {
    head_.resize(i + 1, -1);
    gap_.resize(i + 1, -1);
    nbr_.resize(i + 1);
  }
  head_[i] = allocate(u);
  ++activeCount_;
  ++isolated_;
}

void ConnGeneral::deactivateNode(NodeId u) {
  if (!isActive(u)) throw PreconditionError("node not active");
  if (!nbr_[static_cast<std::size_t>(u)].empty()) throw PreconditionError("deactivated node must be isolated");
  release(head_[static_cast<std::size_t>(u)]);
  head_[static_cast<std::size_t>(u)] = -1;
  --activeCount_;
  --isolated_;
}

std::size_t ConnGeneral::degree(NodeId u) const {
  if (!isActive(u)) throw PreconditionError("node not active");
  return nbr_[static_cast<std::size_t>(u)].size();
}

std::vector<NodeId> ConnGeneral::neighbors(NodeId u) const {
  std::vector<NodeId> out;
  if (!isActive(u)) throw PreconditionError("node not active");
  for (const auto& [w, g] : nbr_[static_cast<std::size_t>(u)]) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

bool ConnGeneral::hasEdge(NodeId u, NodeId v) const {
  return isActive(u) && isActive(v) && nbr_[static_cast<std::size_t>(u)].count(v) > 0;
}

NodeId ConnGeneral::gadgetNode(NodeId u, NodeId v) const {
  if (!hasEdge(u, v)) throw PreconditionError("edge absent");
  return nbr_[static_cast<std::size_t>(u)].at(v);
}

std::vector<NodeId> ConnGeneral::gadget(NodeId u) const {
  std::vector<NodeId> out;
  if (!isActive(u)) return out;
  const NodeId h = head_[static_cast<std::size_t>(u)];
  NodeId g = h;
  do {
    out.push_back(g);
    g = next_[static_cast<std::size_t>(g)];
  } while (g != h);
  return out;
}

bool ConnGeneral::connected(NodeId u, NodeId v) const {
  if (!isActive(u) || !isActive(v)) throw PreconditionError("node not active");
  return inner_.connected(head_[static_cast<std::size_t>(u)], head_[static_cast<std::size_t>(v)]);
}

bool ConnGeneral::treeEdge(NodeId u, NodeId v) const {
  if (!isActive(u) || !isActive(v)) throw PreconditionError("node not active");
  if (!hasEdge(u, v)) return false;
  return inner_.treeEdge(gadgetNode(u, v), gadgetNode(v, u));
}

void ConnGeneral::checkEdge(NodeId u, NodeId v) const {
  if (!isActive(u) || !isActive(v)) throw PreconditionError("node not active");
  if (!hasEdge(u, v)) throw PreconditionError("edge absent");
}

void ConnGeneral::begin() { last_ = InnerOpCounts{}; }

void ConnGeneral::commit(const InnerOpCounts& limit) {
  peak_.raiseTo(last_);
  if (last_.nodeAdds > limit.nodeAdds || last_.nodeRemovals > limit.nodeRemovals ||
      last_.edgeInserts > limit.edgeInserts || last_.edgeDeletes > limit.edgeDeletes)
    throw ContractViolation("host operation exceeded its inner operation budget");
}

void ConnGeneral::innerInsert(NodeId a, NodeId b) {
  inner_.insertEdge(a, b);
  ++last_.edgeInserts;
}

void ConnGeneral::innerDelete(NodeId a, NodeId b, const Edge* hint) {
  if (hint)
    inner_.deleteEdgeWithHint(a, b, *hint);
  else
    inner_.deleteEdge(a, b);
  ++last_.edgeDeletes;
}

// Adds the gadget node n(u,v) to u's cycle at the cycle's non-tree edge.
NodeId ConnGeneral::splice(NodeId u, NodeId v) {
  auto& adj = nbr_[static_cast<std::size_t>(u)];
  const std::size_t d = adj.size();
  meter().charge(4);
  if (d == 0) {
    --isolated_;
    const NodeId x = head_[static_cast<std::size_t>(u)];
    adj.emplace(v, x);
    return x;
  }
  const NodeId x = allocate(u);
  ++last_.nodeAdds;
  const NodeId a = d >= 3 ? gapOf(u) : head_[static_cast<std::size_t>(u)];
  const NodeId b = next_[static_cast<std::size_t>(a)];
  if (d >= 3) innerDelete(a, b);
  next_[static_cast<std::size_t>(a)] = x;
  prev_[static_cast<std::size_t>(x)] = a;
  next_[static_cast<std::size_t>(x)] = b;
  prev_[static_cast<std::size_t>(b)] = x;
  adj.emplace(v, x);
  innerInsert(a, x);
  if (d >= 2) {
    innerInsert(x, b);
    gap_[static_cast<std::size_t>(u)] = x;
  }
  return x;
}

// Gadget node whose cycle successor edge is the cycle's only non-tree edge.
NodeId ConnGeneral::gapOf(NodeId u) const {
  const NodeId a = gap_[static_cast<std::size_t>(u)];
  meter().charge(1);
  if (a < 0 || inner_.treeEdge(a, next_[static_cast<std::size_t>(a)]))
    throw ContractViolation("gadget cycle lost its non-tree edge");
  return a;
}

// Removes n(u,v) from u's cycle; the cross edge is already gone. Both
// cycle edges of x go first, then the cycle is closed again.
void ConnGeneral::unsplice(NodeId u, NodeId v) {
  auto& adj = nbr_[static_cast<std::size_t>(u)];
  const std::size_t d = adj.size();
  const NodeId x = adj.at(v);
  adj.erase(v);
  meter().charge(4);
  if (d == 1) {
    ++isolated_;
    return;
  }
  const NodeId a = prev_[static_cast<std::size_t>(x)];
  const NodeId b = next_[static_cast<std::size_t>(x)];
  if (d == 2) {
    innerDelete(a, x);
  } else {
    const NodeId g = gapOf(u);
    const Edge gap{g, next_[static_cast<std::size_t>(g)]};
    if (g == a) {
      innerDelete(a, x);
      innerDelete(x, b);
    } else if (g == x) {
      innerDelete(x, b);
      innerDelete(a, x);
    } else {
      innerDelete(a, x, &gap);
      innerDelete(x, b);
    }
    if (d >= 4) innerInsert(a, b);
  }
  next_[static_cast<std::size_t>(a)] = b;
  prev_[static_cast<std::size_t>(b)] = a;
  if (head_[static_cast<std::size_t>(u)] == x) head_[static_cast<std::size_t>(u)] = a;
  gap_[static_cast<std::size_t>(u)] = d >= 4 ? a : -1;
  release(x);
  ++last_.nodeRemovals;
}

void ConnGeneral::insertEdge(NodeId u, NodeId v) {
  meter().scheduled(kInsertRounds, [&] {
    if (u == v) throw PreconditionError("self-loop");
    if (!isActive(u) || !isActive(v)) throw PreconditionError("node not active");
    if (hasEdge(u, v)) throw PreconditionError("edge already present");
    if (edgeCount_ >= edgeCapacity_) throw PreconditionError("edge capacity exhausted");
    begin();
    const NodeId x = splice(u, v);
    const NodeId y = splice(v, u);
    innerInsert(x, y);
    ++edgeCount_;
    commit(kInsertLimit);
  });
}

Edge ConnGeneral::toHost(Edge e) const {
  const NodeId hu = hostOf(e.u), hv = hostOf(e.v);
  if (hu == hv || !hasEdge(hu, hv) || gadgetNode(hu, hv) != e.u || gadgetNode(hv, hu) != e.v)
    throw ContractViolation("inner replacement is not a cross edge");
  return Edge{hu, hv}.normalized();
}

ReplacementReport ConnGeneral::translate(ReplacementReport r) const {
  if (r.kind == ReplacementReport::Kind::ReplacedBy) r.edge = toHost(r.edge);
  return r;
}

ReplacementReport ConnGeneral::deleteEdge(NodeId u, NodeId v) {
  return meter().scheduled(kDeleteRounds, [&] {
    checkEdge(u, v);
    begin();
    auto r = translate(inner_.deleteEdge(gadgetNode(u, v), gadgetNode(v, u)));
    ++last_.edgeDeletes;
    unsplice(u, v);
    unsplice(v, u);
    --edgeCount_;
    commit(kDeleteLimit);
    return r;
  });
}

ReplacementReport ConnGeneral::deleteEdgeWithHint(NodeId u, NodeId v, Edge hint) {
  return meter().scheduled(kDeleteRounds, [&] {
    checkEdge(u, v);
    checkEdge(hint.u, hint.v);
    begin();
    const Edge innerHint{gadgetNode(hint.u, hint.v), gadgetNode(hint.v, hint.u)};
    auto r = translate(inner_.deleteEdgeWithHint(gadgetNode(u, v), gadgetNode(v, u), innerHint));
    ++last_.edgeDeletes;
    unsplice(u, v);
    unsplice(v, u);
    --edgeCount_;
    commit(kDeleteLimit);
    return r;
  });
}

ReplacementReport ConnGeneral::findReplacement(NodeId u, NodeId v) {
  checkEdge(u, v);
  return translate(inner_.findReplacement(gadgetNode(u, v), gadgetNode(v, u)));
}

}  // namespace dynconn
