#include "dynconn/sparsify.hpp"

#include <algorithm>
#include <optional>

namespace dynconn {

PartitionTree::PartitionTree(std::size_t n) : n_(n) {
  if (n == 0) throw PreconditionError("graph must have at least one node");
  while ((std::size_t{1} << depth_) < n) ++depth_;
  parts_.resize(static_cast<std::size_t>(depth_) + 1);
  parts_[0] = {{0, static_cast<NodeId>(n)}};
  for (int l = 1; l <= depth_; ++l)
    for (auto [lo, hi] : parts_[static_cast<std::size_t>(l) - 1]) {
      const NodeId mid = lo + (hi - lo + 1) / 2;
      parts_[static_cast<std::size_t>(l)].emplace_back(lo, mid);
      parts_[static_cast<std::size_t>(l)].emplace_back(mid, hi);
    }
  const auto stride = static_cast<std::size_t>(depth_) + 1;
  index_.assign(n * stride, 0);
  for (std::size_t l = 0; l < stride; ++l)
    for (std::size_t k = 0; k < parts_[l].size(); ++k)
      for (NodeId v = parts_[l][k].first; v < parts_[l][k].second; ++v)
        index_[static_cast<std::size_t>(v) * stride + l] = static_cast<std::int32_t>(k);
}

std::pair<NodeId, NodeId> PartitionTree::interval(int level, std::int64_t k) const {
  if (level < 0 || level > depth_) return {0, 0};
  const auto& row = parts_[static_cast<std::size_t>(level)];
  if (k < 0 || static_cast<std::size_t>(k) >= row.size()) return {0, 0};
  return row[static_cast<std::size_t>(k)];
}

std::int64_t PartitionTree::indexOf(NodeId v, int level) const {
  if (v < 0 || static_cast<std::size_t>(v) >= n_ || level < 0 || level > depth_)
    throw PreconditionError("partition lookup out of range");
  return index_[static_cast<std::size_t>(v) * (static_cast<std::size_t>(depth_) + 1) + static_cast<std::size_t>(level)];
}

SparsTree::SparsTree(std::size_t n, Mode mode, CostMeter& meter)
    : partition_(n), mode_(mode), meter_(&meter), active_(n, 0), degree_(n, 0) {
  materialize(rootKey());
}

std::uint64_t SparsTree::updateRounds() const {
  std::uint64_t rounds = 4096 + EulerForest::kDeleteRounds + ConnGeneral::kInsertRounds + ConnGeneral::kDeleteRounds;
  if (mode_ == Mode::Bipartiteness) rounds += 2 * BipartiteGeneral::kApplyRounds;
  return rounds;
}

std::uint64_t SparsTree::edgeKey(NodeId u, NodeId v) {
  const auto lo = static_cast<std::uint32_t>(std::min(u, v)), hi = static_cast<std::uint32_t>(std::max(u, v));
  return (std::uint64_t{lo} << 32) | hi;
}

void SparsTree::checkNode(NodeId v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= size()) throw PreconditionError("node id out of range");
  if (!active_[static_cast<std::size_t>(v)]) throw PreconditionError("node not active");
}

bool SparsTree::isActive(NodeId v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= size()) throw PreconditionError("node id out of range");
  return active_[static_cast<std::size_t>(v)] != 0;
}

bool SparsTree::hasEdge(NodeId u, NodeId v) const { return u != v && edges_.count(edgeKey(u, v)) > 0; }

std::size_t SparsTree::degree(NodeId v) const {
  checkNode(v);
  return degree_[static_cast<std::size_t>(v)];
}

std::vector<SparsKey> SparsTree::keyPath(NodeId x, NodeId y) const {
  const int L = partition_.depth();
  std::vector<SparsKey> path(static_cast<std::size_t>(L) + 1);
  meter_->parallelUniform(path.size(), 3);
  for (int l = L; l >= 0; --l) {
    std::int64_t a = partition_.indexOf(x, l), b = partition_.indexOf(y, l);
    if (a > b) std::swap(a, b);
    path[static_cast<std::size_t>(L - l)] = SparsKey{l, a, b};
  }
  return path;
}

const SparsNode* SparsTree::find(const SparsKey& key) const {
  auto it = nodes_.find(key);
  return it == nodes_.end() ? nullptr : &it->second;
}

std::vector<SparsKey> SparsTree::children(const SparsKey& key) const {
  std::vector<SparsKey> out;
  if (key.level >= partition_.depth()) return out;
  auto nonEmpty = [&](std::int64_t k) {
    auto [lo, hi] = partition_.interval(key.level + 1, k);
    return hi > lo;
  };
  for (std::int64_t c1 = 2 * key.k1; c1 <= 2 * key.k1 + 1; ++c1)
    for (std::int64_t c2 = 2 * key.k2; c2 <= 2 * key.k2 + 1; ++c2) {
      if (!nonEmpty(c1) || !nonEmpty(c2)) continue;
      SparsKey c{key.level + 1, std::min(c1, c2), std::max(c1, c2)};
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
  return out;
}

SparsNode& SparsTree::materialize(const SparsKey& key) {
  auto [it, fresh] = nodes_.try_emplace(key);
  SparsNode& node = it->second;
  if (!fresh) return node;
  node.key = key;
  auto [lo1, hi1] = partition_.interval(key.level, key.k1);
  auto [lo2, hi2] = partition_.interval(key.level, key.k2);
  node.vertexCount = static_cast<std::size_t>(hi1 - lo1) + (key.k1 == key.k2 ? 0 : static_cast<std::size_t>(hi2 - lo2));
  const std::size_t s = std::max<std::size_t>(node.vertexCount, 1);
  node.conn = std::make_unique<ConnGeneral>(s, 4 * s, *meter_);
  if (mode_ == Mode::Bipartiteness) node.bip = std::make_unique<BipartiteGeneral>(s, 4 * s, *meter_);
  meter_->charge(4);
  return node;
}

NodeId SparsTree::localOf(const SparsNode& node, NodeId v) const {
  auto it = node.local.find(v);
  return it == node.local.end() ? -1 : it->second;
}

NodeId SparsTree::attach(SparsNode& node, NodeId v) {
  if (NodeId id = localOf(node, v); id >= 0) return id;
  NodeId id;
  if (!node.freeLocal.empty()) {
    id = node.freeLocal.back();
    node.freeLocal.pop_back();
    node.global[static_cast<std::size_t>(id)] = v;
  } else {
    id = static_cast<NodeId>(node.global.size());
    node.global.push_back(v);
    node.baseDegree.push_back(0);
  }
  node.local.emplace(v, id);
  node.conn->activateNode(id);
  if (node.bip) node.bip->activateNode(id);
  meter_->charge(2);
  return id;
}

void SparsTree::detach(SparsNode& node, NodeId v) {
  const NodeId id = localOf(node, v);
  if (id < 0) return;
  node.conn->deactivateNode(id);
  if (node.bip) node.bip->deactivateNode(id);
  node.local.erase(v);
  node.global[static_cast<std::size_t>(id)] = -1;
  node.freeLocal.push_back(id);
  meter_->charge(2);
}

void SparsTree::baseInsert(SparsNode& node, NodeId x, NodeId y) {
  const NodeId lx = attach(node, x), ly = attach(node, y);
  node.conn->insertEdge(lx, ly);
  if (node.bip) node.bip->insertEdge(lx, ly);
  node.baseEdges.emplace(std::min(x, y), std::max(x, y));
  ++node.baseDegree[static_cast<std::size_t>(lx)];
  ++node.baseDegree[static_cast<std::size_t>(ly)];
  recordPeaks(node, true);
}

void SparsTree::recordPeaks(const SparsNode& node, bool inserted) {
  (inserted ? peaks_.connInsert : peaks_.connDelete).raiseTo(node.conn->lastCounts());
  if (!node.bip) return;
  peaks_.gadgetEndpoint = std::max(peaks_.gadgetEndpoint, node.bip->peakGadgetChanges());
  peaks_.gadgetTotal = std::max(peaks_.gadgetTotal, node.bip->peakInnerChanges());
  peaks_.distance2 = std::max(peaks_.distance2, node.bip->inner().peakDistance2Changes());
  peaks_.distance2Counts.raiseTo(node.bip->inner().distance2().peakCounts());
}

ReplacementReport SparsTree::baseDelete(SparsNode& node, NodeId x, NodeId y, const Edge* hint) {
  const NodeId lx = localOf(node, x), ly = localOf(node, y);
  if (lx < 0 || ly < 0) throw ContractViolation("base edge endpoint not attached");
  ReplacementReport report;
  if (hint) {
    const NodeId hu = localOf(node, hint->u), hv = localOf(node, hint->v);
    if (hu < 0 || hv < 0) throw ContractViolation("hint endpoint not attached");
    report = node.conn->deleteEdgeWithHint(lx, ly, Edge{hu, hv});
  } else {
    report = node.conn->deleteEdge(lx, ly);
  }
  if (node.bip) node.bip->deleteEdge(lx, ly);
  recordPeaks(node, false);
  if (report.kind == ReplacementReport::Kind::ReplacedBy)
    report.edge = Edge{node.global[static_cast<std::size_t>(report.edge.u)],
                       node.global[static_cast<std::size_t>(report.edge.v)]}.normalized();
  node.baseEdges.erase({std::min(x, y), std::max(x, y)});
  const bool isRoot = node.key == rootKey();
  for (NodeId l : {lx, ly})
    if (--node.baseDegree[static_cast<std::size_t>(l)] == 0 && !isRoot)
      detach(node, node.global[static_cast<std::size_t>(l)]);
  return report;
}

bool SparsTree::probeConnected(const SparsNode& node, NodeId x, NodeId y) const {
  const NodeId lx = localOf(node, x), ly = localOf(node, y);
  meter_->charge(2);
  return lx >= 0 && ly >= 0 && node.conn->connected(lx, ly);
}

bool SparsTree::probeTree(const SparsNode& node, NodeId x, NodeId y) const {
  const NodeId lx = localOf(node, x), ly = localOf(node, y);
  meter_->charge(2);
  return lx >= 0 && ly >= 0 && node.conn->hasEdge(lx, ly) && node.conn->treeEdge(lx, ly);
}

void SparsTree::activateNode(NodeId v) {
  if (v < 0 || static_cast<std::size_t>(v) >= size()) throw PreconditionError("node id out of range");
  if (active_[static_cast<std::size_t>(v)]) throw PreconditionError("node already active");
  attach(nodes_.at(rootKey()), v);
  active_[static_cast<std::size_t>(v)] = 1;
  ++activeCount_;
}

void SparsTree::deactivateNode(NodeId v) {
  checkNode(v);
  if (degree_[static_cast<std::size_t>(v)] != 0) throw PreconditionError("node still has edges");
  detach(nodes_.at(rootKey()), v);
  active_[static_cast<std::size_t>(v)] = 0;
  --activeCount_;
}

void SparsTree::insertEdge(NodeId x, NodeId y) {
  checkNode(x);
  checkNode(y);
  if (x == y) throw PreconditionError("self-loop");
  if (hasEdge(x, y)) throw PreconditionError("edge already present");
  meter_->scheduled(updateRounds(), [&] {
    const auto path = keyPath(x, y);
    const std::size_t P = path.size();
    std::vector<SparsNode*> nodes(P);
    meter_->parallelFor(P, [&](std::size_t i) {
      nodes[i] = &materialize(path[i]);
      ++nodes[i]->pathEdges;
      meter_->charge(1);
    });
    std::vector<char> apart(P);
    meter_->parallelFor(P, [&](std::size_t i) { apart[i] = !probeConnected(*nodes[i], x, y); });
    const auto end = initialSegmentEnd(apart, *meter_);
    if (!end) throw ContractViolation("leaf base graph already connects the edge");
    const std::size_t seg = *end + 1;
    const std::size_t touched = std::min(seg + 1, P);
    std::vector<char> wrong(touched, 0);
    meter_->parallelFor(touched, [&](std::size_t i) {
      baseInsert(*nodes[i], x, y);
      if (probeTree(*nodes[i], x, y) != (i < seg)) wrong[i] = 1;
    });
    if (std::find(wrong.begin(), wrong.end(), 1) != wrong.end())
      throw ContractViolation("inserted edge has the wrong tree status");
    edges_.insert(edgeKey(x, y));
    ++degree_[static_cast<std::size_t>(x)];
    ++degree_[static_cast<std::size_t>(y)];
    touched_.clear();
    for (std::size_t i = 0; i < touched; ++i) touched_.push_back(path[i].level);
    if (mode_ == Mode::Bipartiteness) refreshFlags(nodes);
  });
}

void SparsTree::deleteEdge(NodeId x, NodeId y) {
  checkNode(x);
  checkNode(y);
  if (!hasEdge(x, y)) throw PreconditionError("edge absent");
  meter_->scheduled(updateRounds(), [&] {
    using Kind = ReplacementReport::Kind;
    const auto path = keyPath(x, y);
    const std::size_t P = path.size();
    std::vector<SparsNode*> nodes(P);
    std::vector<char> inBase(P), isTree(P);
    meter_->parallelFor(P, [&](std::size_t i) {
      nodes[i] = &nodes_.at(path[i]);
      inBase[i] = nodes[i]->baseEdges.count({std::min(x, y), std::max(x, y)}) > 0;
      isTree[i] = inBase[i] && probeTree(*nodes[i], x, y);
    });
    const auto end = initialSegmentEnd(isTree, *meter_);
    if (!end) throw ContractViolation("edge is not a tree edge of its leaf");
    const std::size_t p = *end;
    const bool hasTop = p + 1 < P && inBase[p + 1];

    std::vector<std::optional<Edge>> own(p + 1);
    meter_->parallelFor(p + 1, [&](std::size_t i) {
      SparsNode& node = *nodes[i];
      auto report = node.conn->findReplacement(localOf(node, x), localOf(node, y));
      if (report.kind == Kind::NonTreeDeleted) throw ContractViolation("tree edge reported as non-tree");
      if (report.kind == Kind::ReplacedBy)
        own[i] = Edge{node.global[static_cast<std::size_t>(report.edge.u)],
                      node.global[static_cast<std::size_t>(report.edge.v)]}.normalized();
    });
    // Each level reconnects through the nearest replacement found at or below it.
    std::vector<std::int64_t> found(p + 1);
    meter_->parallelFor(p + 1, [&](std::size_t j) {
      found[j] = own[j] ? static_cast<std::int64_t>(j) : -1;
      meter_->charge(1);
    });
    std::vector<std::optional<Edge>> repl(p + 1);
    meter_->parallelFor(p + 1, [&](std::size_t i) {
      auto [at, key] = reduceExtremum<std::int64_t>(std::span<const std::int64_t>(found.data(), i + 1), Extremum::Max,
                                                    *meter_);
      if (key >= 0) repl[i] = own[static_cast<std::size_t>(key)];
    });

    const std::size_t touched = p + 1 + (hasTop ? 1 : 0);
    std::vector<char> wrong(touched, 0);
    meter_->parallelFor(touched, [&](std::size_t i) {
      SparsNode& node = *nodes[i];
      if (i <= p) {
        if (i > 0 && repl[i - 1]) baseInsert(node, repl[i - 1]->u, repl[i - 1]->v);
        const Edge* hint = repl[i] ? &*repl[i] : nullptr;
        auto report = baseDelete(node, x, y, hint);
        if (hint ? report.kind != Kind::ReplacedBy || !(report.edge == *hint) : report.kind != Kind::SplitNoReplacement)
          wrong[i] = 1;
      } else {
        if (baseDelete(node, x, y, nullptr).kind != Kind::NonTreeDeleted) wrong[i] = 1;
        if (repl[p]) {
          baseInsert(node, repl[p]->u, repl[p]->v);
          if (probeTree(node, repl[p]->u, repl[p]->v)) wrong[i] = 1;
        }
      }
    });
    if (std::find(wrong.begin(), wrong.end(), 1) != wrong.end())
      throw ContractViolation("replacement disagrees across levels");

    edges_.erase(edgeKey(x, y));
    --degree_[static_cast<std::size_t>(x)];
    --degree_[static_cast<std::size_t>(y)];
    meter_->parallelFor(P, [&](std::size_t i) {
      --nodes[i]->pathEdges;
      meter_->charge(1);
    });
    touched_.clear();
    for (std::size_t i = 0; i < touched; ++i) touched_.push_back(path[i].level);
    if (mode_ == Mode::Bipartiteness) refreshFlags(nodes);
    release(path);
  });
}

void SparsTree::refreshFlags(const std::vector<SparsNode*>& path) {
  const std::size_t P = path.size();
  std::vector<char> term(P);
  meter_->parallelFor(P, [&](std::size_t i) {
    SparsNode& node = *path[i];
    node.ownBit = node.bip->isBipartite();
    bool ok = node.ownBit;
    const auto kids = children(node.key);
    meter_->parallelFor(kids.size(), [&](std::size_t c) {
      meter_->charge(1);
      if (i > 0 && kids[c] == path[i - 1]->key) return;
      if (const SparsNode* child = find(kids[c]); child && !child->subtreeFlag) ok = false;
    });
    term[i] = ok;
  });
  const auto flags = prefixAnd(term, *meter_);
  meter_->parallelFor(P, [&](std::size_t i) {
    path[i]->subtreeFlag = flags[i] != 0;
    meter_->charge(1);
  });
}

void SparsTree::release(const std::vector<SparsKey>& path) {
  meter_->parallelFor(path.size(), [&](std::size_t i) {
    meter_->charge(1);
    if (path[i] == rootKey()) return;
    auto it = nodes_.find(path[i]);
    if (it != nodes_.end() && it->second.pathEdges == 0) nodes_.erase(it);
  });
}

bool SparsTree::connected(NodeId u, NodeId v) const {
  checkNode(u);
  checkNode(v);
  return meter_->scheduled(kQueryRounds, [&] { return u == v || probeConnected(nodes_.at(rootKey()), u, v); });
}

std::size_t SparsTree::nComponents() const {
  return meter_->scheduled(kQueryRounds, [&] {
    meter_->charge(1);
    return nodes_.at(rootKey()).conn->nComponents();
  });
}

bool SparsTree::treeEdge(NodeId u, NodeId v) const {
  checkNode(u);
  checkNode(v);
  return meter_->scheduled(kQueryRounds, [&] { return hasEdge(u, v) && probeTree(nodes_.at(rootKey()), u, v); });
}

bool SparsTree::isBipartite() const {
  if (mode_ != Mode::Bipartiteness) throw PreconditionError("bipartiteness needs bipartiteness mode");
  return meter_->scheduled(kQueryRounds, [&] {
    meter_->charge(1);
    return nodes_.at(rootKey()).subtreeFlag;
  });
}

}  // namespace dynconn
