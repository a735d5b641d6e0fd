#include "dynconn/euler_forest.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace dynconn {

std::size_t chunkCapacityFor(std::size_t nodeCapacity) {
  const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(3.0 * static_cast<double>(nodeCapacity))));
  return std::max<std::size_t>(2, k);
}

std::size_t slotCountFor(std::size_t nodeCapacity) {
  const std::size_t K = chunkCapacityFor(nodeCapacity);
  return 4 * ((3 * nodeCapacity + K - 1) / K) + 8;
}

EulerForest::EulerForest(std::size_t nodeCapacity, CostMeter& meter)
    : meter_(&meter),
      capacity_(nodeCapacity),
      store_(chunkCapacityFor(nodeCapacity), slotCountFor(nodeCapacity), meter) {
  if (nodeCapacity == 0) throw PreconditionError("node capacity must be positive");
}

// Node records are allocated up to the highest id touched so far.
EulerForest::Node& EulerForest::node(NodeId v) {
  if (v < 0 || static_cast<std::size_t>(v) >= capacity_) throw PreconditionError("node id out of range");
  const auto i = static_cast<std::size_t>(v);
  if (i >= nodes_.size()) {
    nodes_.resize(i + 1);
    stamp_.resize(i + 1, 0);
  }
  return nodes_[i];
}

const EulerForest::Node& EulerForest::node(NodeId v) const {
  static const Node idle{};
  if (v < 0 || static_cast<std::size_t>(v) >= capacity_) throw PreconditionError("node id out of range");
  const auto i = static_cast<std::size_t>(v);
  return i < nodes_.size() ? nodes_[i] : idle;
}

bool EulerForest::isActive(NodeId v) const { return node(v).active; }

void EulerForest::activateNode(NodeId v) {
  Node& x = node(v);
  if (x.active) throw PreconditionError("node already active");
  x = Node{};
  x.active = true;
  ++activeCount_;
  meter_->charge(1);
}

void EulerForest::deactivateNode(NodeId v) {
  Node& x = node(v);
  if (!x.active) throw PreconditionError("node not active");
  if (degree(v) != 0) throw PreconditionError("deactivated node must be isolated");
  x.active = false;
  --activeCount_;
  meter_->charge(1);
}

int EulerForest::slotOf(NodeId v, NodeId w) const {
  const Node& x = node(v);
  for (int k = 0; k < kMaxDegree; ++k)
    if (x.nbr[static_cast<std::size_t>(k)] == w) return k;
  return -1;
}

int EulerForest::degree(NodeId v) const {
  const Node& x = node(v);
  if (!x.active) throw PreconditionError("node not active");
  return static_cast<int>(std::count_if(x.nbr.begin(), x.nbr.end(), [](NodeId w) { return w >= 0; }));
}

std::vector<NodeId> EulerForest::neighbors(NodeId v) const {
  std::vector<NodeId> out;
  for (NodeId w : node(v).nbr)
    if (w >= 0) out.push_back(w);
  return out;
}

bool EulerForest::hasEdge(NodeId u, NodeId v) const { return u != v && slotOf(u, v) >= 0; }

bool EulerForest::treeEdge(NodeId u, NodeId v) const {
  if (!isActive(u) || !isActive(v)) throw PreconditionError("node not active");
  const int k = slotOf(u, v);
  return u != v && k >= 0 && node(u).tree[static_cast<std::size_t>(k)];
}

ArrayId EulerForest::treeArray(NodeId v) const {
  const Node& x = node(v);
  for (int k = 0; k < kMaxDegree; ++k)
    if (x.nbr[static_cast<std::size_t>(k)] >= 0 && x.tree[static_cast<std::size_t>(k)])
      return store_.chunk(x.out[static_cast<std::size_t>(k)].chunk).array;
  return kNoArray;
}

bool EulerForest::connected(NodeId u, NodeId v) const {
  if (!isActive(u) || !isActive(v)) throw PreconditionError("node not active");
  meter_->charge(2);
  if (u == v) return true;
  const ArrayId a = treeArray(u);
  return a != kNoArray && a == treeArray(v);
}

EulerForest::Loc& EulerForest::loc(const TourEdge& e) {
  const int k = slotOf(e.from, e.to);
  if (k < 0) throw ContractViolation("tour edge without neighbor entry");
  return node(e.from).out[static_cast<std::size_t>(k)];
}

std::pair<ChunkId, std::size_t> EulerForest::locate(NodeId from, NodeId to) const {
  const int k = slotOf(from, to);
  if (k < 0 || !node(from).tree[static_cast<std::size_t>(k)]) throw PreconditionError("not a tree edge");
  const Loc& l = node(from).out[static_cast<std::size_t>(k)];
  return {l.chunk, l.offset};
}

void EulerForest::relocate(ChunkId c) {
  const auto& edges = store_.chunk(c).edges;
  meter_->parallelFor(edges.size(), [&](std::size_t i) {
    meter_->charge(4);
    loc(edges[i]) = Loc{c, i};
  });
  modified_.insert(c);
}

EulerForest::TourPos EulerForest::posOf(NodeId from, NodeId to) const {
  auto [c, off] = locate(from, to);
  return TourPos{store_.chunk(c).position, off};
}

std::vector<ChunkId> EulerForest::appearances(NodeId v) const {
  std::vector<ChunkId> out;
  const Node& x = node(v);
  for (int k = 0; k < kMaxDegree; ++k) {
    const NodeId y = x.nbr[static_cast<std::size_t>(k)];
    if (y < 0 || !x.tree[static_cast<std::size_t>(k)]) continue;
    out.push_back(x.out[static_cast<std::size_t>(k)].chunk);
    out.push_back(node(y).out[static_cast<std::size_t>(slotOf(y, v))].chunk);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void EulerForest::addNeighbor(NodeId a, NodeId b, bool isTree) {
  Node& x = node(a);
  for (int k = 0; k < kMaxDegree; ++k) {
    auto s = static_cast<std::size_t>(k);
    if (x.nbr[s] >= 0) continue;
    x.nbr[s] = b;
    x.tree[s] = isTree;
    x.out[s] = Loc{};
    return;
  }
  throw PreconditionError("degree bound exceeded");
}

void EulerForest::removeNeighbor(NodeId a, NodeId b) {
  const int k = slotOf(a, b);
  if (k < 0) throw ContractViolation("removing a missing neighbor");
  Node& x = node(a);
  x.nbr[static_cast<std::size_t>(k)] = -1;
  x.tree[static_cast<std::size_t>(k)] = false;
  x.out[static_cast<std::size_t>(k)] = Loc{};
}

BitArray EulerForest::computeLinks(ChunkId c) const {
  BitArray bits(store_.J());
  const auto& edges = store_.chunk(c).edges;
  meter_->parallelFor(2 * edges.size(), [&](std::size_t p) {
    const TourEdge& e = edges[p / 2];
    const NodeId x = p % 2 ? e.to : e.from;
    const Node& nx = node(x);
    meter_->parallelFor(kMaxDegree, [&](std::size_t k) {
      meter_->charge(1);
      const NodeId w = nx.nbr[k];
      if (w < 0 || nx.tree[k]) return;
      for (ChunkId d : appearances(w)) {
        meter_->charge(2);
        const SlotId s = store_.chunk(d).slot;
        if (s != kNoSlot) bits.set(static_cast<std::size_t>(s));
      }
    });
  });
  return bits;
}

void EulerForest::linkNonTree(NodeId u, NodeId v) {
  const auto au = appearances(u), av = appearances(v);
  meter_->parallelFor(au.size() * av.size(), [&](std::size_t p) {
    const ChunkId a = au[p / av.size()], b = av[p % av.size()];
    meter_->charge(2);
    if (store_.chunk(a).slot != kNoSlot && store_.chunk(b).slot != kNoSlot) store_.link(a, b);
  });
}

bool EulerForest::stillLinked(ChunkId a, ChunkId b) const {
  ++stampValue_;
  const auto& eb = store_.chunk(b).edges;
  meter_->parallelFor(eb.size(), [&](std::size_t i) {
    meter_->charge(2);
    stamp_[static_cast<std::size_t>(eb[i].from)] = stampValue_;
    stamp_[static_cast<std::size_t>(eb[i].to)] = stampValue_;
  });
  bool linked = false;
  const auto& ea = store_.chunk(a).edges;
  meter_->parallelFor(2 * ea.size(), [&](std::size_t p) {
    const NodeId x = p % 2 ? ea[p / 2].to : ea[p / 2].from;
    const Node& nx = node(x);
    meter_->charge(kMaxDegree);
    for (std::size_t k = 0; k < kMaxDegree; ++k)
      if (nx.nbr[k] >= 0 && !nx.tree[k] && stamp_[static_cast<std::size_t>(nx.nbr[k])] == stampValue_) linked = true;
  });
  return linked;
}

void EulerForest::unlinkNonTree(NodeId u, NodeId v) {
  const auto au = appearances(u), av = appearances(v);
  meter_->parallelFor(au.size() * av.size(), [&](std::size_t p) {
    const ChunkId a = au[p / av.size()], b = av[p % av.size()];
    meter_->charge(2);
    if (store_.chunk(a).slot == kNoSlot || store_.chunk(b).slot == kNoSlot) return;
    if (!stillLinked(a, b)) store_.unlink(a, b);
  });
}

ChunkId EulerForest::splitChunkAt(ChunkId c, std::size_t offset) {
  auto& edges = store_.edgesOf(c);
  if (offset == 0 || offset >= edges.size()) throw ContractViolation("chunk split offset out of range");
  std::vector<TourEdge> tail(edges.begin() + static_cast<std::ptrdiff_t>(offset), edges.end());
  edges.resize(offset);
  meter_->parallelUniform(tail.size(), 2);
  const ChunkId d = store_.createChunk(std::move(tail));
  const Chunk& x = store_.chunk(c);
  store_.insertChunk(x.array, x.position + 1, d);
  relocate(d);
  modified_.insert(c);
  return d;
}

void EulerForest::dropChunk(ChunkId c) {
  if (store_.chunk(c).slot != kNoSlot) {
    store_.bulkSetLinks(c, BitArray(store_.J()));
    store_.deactivate(c);
  }
  const Chunk& x = store_.chunk(c);
  if (x.array != kNoArray) store_.deleteChunk(x.array, x.position);
  store_.destroyChunk(c);
  modified_.erase(c);
}

// Merges or rebalances tour-adjacent chunks until at most one chunk of the
// array holds fewer than K/2 edges.
void EulerForest::repair(ArrayId a) {
  const std::size_t K = store_.K();
  while (true) {
    const auto& order = store_.order(a);
    std::vector<char> under(order.size(), 0);
    meter_->parallelFor(order.size(), [&](std::size_t i) {
      meter_->charge(2);
      under[i] = 2 * store_.chunk(order[i]).edges.size() < K;
    });
    const auto count = static_cast<std::size_t>(std::count(under.begin(), under.end(), 1));
    if (count <= 1 || order.size() <= 1) return;
    const std::size_t i = *chooseAny(under, *meter_);
    const std::size_t lo = i + 1 < order.size() ? i : i - 1;
    const ChunkId c = order[lo], d = order[lo + 1];
    auto& ec = store_.edgesOf(c);
    auto& ed = store_.edgesOf(d);
    const std::size_t total = ec.size() + ed.size();
    meter_->parallelUniform(total, 2);
    if (total <= K) {
      ec.insert(ec.end(), ed.begin(), ed.end());
      ed.clear();
      relocate(c);
      dropChunk(d);
    } else {
      std::vector<TourEdge> all(ec);
      all.insert(all.end(), ed.begin(), ed.end());
      ec.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(total / 2));
      ed.assign(all.begin() + static_cast<std::ptrdiff_t>(total / 2), all.end());
      relocate(c);
      relocate(d);
    }
  }
}

// Restores the chunk-size invariant of every array touched by the current
// operation, then brings slots and link vectors up to date.
void EulerForest::finish() {
  auto touched = [&] {
    std::vector<ArrayId> out;
    for (ChunkId c : modified_) out.push_back(store_.chunk(c).array);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  for (ArrayId a : touched()) repair(a);
  const auto arrays = touched();
  auto links = [&](ChunkId c) { return computeLinks(c); };
  meter_->parallelFor(arrays.size(), [&](std::size_t k) { store_.normalizeSlots(arrays[k], links); });
  const std::vector<ChunkId> changed(modified_.begin(), modified_.end());
  meter_->parallelFor(changed.size(), [&](std::size_t k) {
    if (store_.chunk(changed[k]).slot != kNoSlot) store_.bulkSetLinks(changed[k], computeLinks(changed[k]));
  });
  modified_.clear();
}

// P1 (u,v) Q2 Q1 (v,u) P2, where u's tour is P1 P2 with P2 leaving u and
// v's tour is Q1 Q2 with Q2 leaving v.
void EulerForest::mergeTrees(NodeId u, NodeId v) {
  // Chunk array of x's tour, cut so that a chunk boundary sits right before
  // an edge leaving x; returns the array and the position of that chunk.
  auto anchor = [&](NodeId x) -> std::pair<ArrayId, std::size_t> {
    const Node& nx = node(x);
    for (std::size_t k = 0; k < kMaxDegree; ++k) {
      if (nx.nbr[k] < 0 || !nx.tree[k]) continue;
      const Loc l = nx.out[k];
      ChunkId start = l.chunk;
      if (l.offset > 0) start = splitChunkAt(l.chunk, l.offset);
      const Chunk& s = store_.chunk(start);
      return {s.array, s.position};
    }
    meter_->charge(1);
    return {store_.createArray(), 0};
  };
  const auto [au, bu] = anchor(u);
  const auto [av, bv] = anchor(v);
  addNeighbor(u, v, true);
  addNeighbor(v, u, true);
  const ChunkId n1 = store_.createChunk({TourEdge{u, v}});
  const ChunkId n2 = store_.createChunk({TourEdge{v, u}});

  store_.insertChunk(au, bu, n1);
  const ArrayId q = store_.split(av, bv);
  store_.concatenate(q, av);
  store_.insertChunk(q, store_.length(q), n2);
  const ArrayId tail = store_.split(au, bu + 1);
  store_.concatenate(au, q);
  store_.concatenate(au, tail);
  relocate(n1);
  relocate(n2);
  modified_.insert(n1);
  modified_.insert(n2);
  ++treeEdges_;
}

// Tour P1 e1 P2 e2 P3 with {e1, e2} = {(u,v), (v,u)} becomes the two tours
// P1 P3 and P2.
void EulerForest::cutTree(NodeId u, NodeId v) {
  auto isolate = [&](NodeId from, NodeId to) {
    auto [c, off] = locate(from, to);
    if (off > 0) c = splitChunkAt(c, off);
    if (store_.chunk(c).edges.size() > 1) splitChunkAt(c, 1);
    return c;
  };
  const Cut cut = cutOf(u, v);
  const TourEdge e1 = cut.firstEdge;
  const ChunkId c1 = isolate(e1.from, e1.to);
  const ChunkId c2 = isolate(e1.to, e1.from);
  const ArrayId a = cut.array;
  const std::size_t p1 = store_.chunk(c1).position, p2 = store_.chunk(c2).position;
  const ArrayId tail = store_.split(a, p2 + 1);
  const ArrayId mid = store_.split(a, p1 + 1);
  dropChunk(c1);
  dropChunk(c2);
  store_.concatenate(a, tail);
  removeNeighbor(u, v);
  removeNeighbor(v, u);
  for (ArrayId x : {a, mid}) {
    if (store_.length(x) == 0)
      store_.destroyArray(x);
    else
      modified_.insert(store_.chunkAt(x, 0));
  }
  --treeEdges_;
}

EulerForest::Cut EulerForest::cutOf(NodeId u, NodeId v) const {
  const TourPos a = posOf(u, v), b = posOf(v, u);
  meter_->charge(4);
  if (a < b) return Cut{treeArray(u), a, b, TourEdge{u, v}};
  return Cut{treeArray(u), b, a, TourEdge{v, u}};
}

// Whether w lies in the subtree entered by the cut's first tour edge.
bool EulerForest::inside(const Cut& cut, NodeId w) const {
  meter_->charge(4);
  if (w == cut.firstEdge.to) return true;
  if (w == cut.firstEdge.from) return false;
  const Node& x = node(w);
  for (std::size_t k = 0; k < kMaxDegree; ++k) {
    if (x.nbr[k] < 0 || !x.tree[k]) continue;
    const TourPos p = posOf(w, x.nbr[k]);
    return cut.first < p && p < cut.second;
  }
  throw ContractViolation("side test on a node outside the tree");
}

// Non-tree edges crossing the cut with an endpoint occurring in c (and, if
// given, the other endpoint occurring in partner).
void EulerForest::scanChunk(const Cut& cut, ChunkId c, std::optional<ChunkId> partner,
                            std::vector<Candidate>& out) const {
  if (partner) {
    ++stampValue_;
    const auto& eb = store_.chunk(*partner).edges;
    meter_->parallelFor(eb.size(), [&](std::size_t i) {
      meter_->charge(2);
      stamp_[static_cast<std::size_t>(eb[i].from)] = stampValue_;
      stamp_[static_cast<std::size_t>(eb[i].to)] = stampValue_;
    });
  } else {
    meter_->parallelUniform(0, 0);
  }
  const Chunk& ch = store_.chunk(c);
  meter_->parallelFor(2 * ch.edges.size(), [&](std::size_t p) {
    const NodeId x = p % 2 ? ch.edges[p / 2].to : ch.edges[p / 2].from;
    const Node& nx = node(x);
    const bool xin = inside(cut, x);
    meter_->parallelFor(kMaxDegree, [&](std::size_t k) {
      meter_->charge(2);
      const NodeId w = nx.nbr[k];
      if (w < 0 || nx.tree[k]) return;
      if (partner && stamp_[static_cast<std::size_t>(w)] != stampValue_) return;
      if (inside(cut, w) == xin) return;
      const NodeId in = xin ? x : w, outside = xin ? w : x;
      const int cls = priority_ ? priority_(in, outside) : 0;
      out.push_back(Candidate{in, outside, cls, TourPos{ch.position, p / 2}});
    });
  });
}

Edge EulerForest::pick(std::vector<Candidate>& candidates) {
  if (meter_->policy().isCommon()) {
    using Key = std::tuple<int, std::size_t, std::size_t, NodeId, NodeId>;
    std::vector<Key> keys(candidates.size());
    meter_->parallelFor(candidates.size(), [&](std::size_t i) {
      meter_->charge(1);
      const Candidate& c = candidates[i];
      keys[i] = Key{c.cls, c.where.chunkPos, c.where.offset, c.inside, c.outside};
    });
    const auto [i, key] = reduceExtremum<Key>(keys, Extremum::Min, *meter_);
    return Edge{candidates[i].inside, candidates[i].outside}.normalized();
  }
  int best = candidates.front().cls;
  for (const Candidate& c : candidates) best = std::min(best, c.cls);
  std::vector<char> flags(candidates.size());
  meter_->parallelFor(candidates.size(), [&](std::size_t i) {
    meter_->charge(1);
    flags[i] = candidates[i].cls == best;
  });
  const std::size_t i = *chooseAny(flags, *meter_);
  return Edge{candidates[i].inside, candidates[i].outside}.normalized();
}

// The chunks holding the two cut edges are scanned directly; chunks strictly
// between them hold only inside nodes and chunks outside them only outside
// nodes, so any link across those ranges is a crossing edge.
std::optional<Edge> EulerForest::searchReplacement(const Cut& cut) {
  const ArrayId a = cut.array;
  const std::size_t n = store_.length(a);
  const std::size_t i1 = cut.first.chunkPos, i2 = cut.second.chunkPos;
  std::vector<Candidate> found;
  meter_->parallelInvoke(
      [&] { scanChunk(cut, store_.chunkAt(a, i1), std::nullopt, found); },
      [&] {
        if (i2 != i1) scanChunk(cut, store_.chunkAt(a, i2), std::nullopt, found);
      },
      [&] {
        if (i1 + 1 >= i2 || i1 == 0) return;
        if (auto hit = store_.query(a, i1 + 1, i2 - 1, 0, i1 - 1))
          scanChunk(cut, store_.chunkAt(a, hit->first), store_.chunkAt(a, hit->second), found);
      },
      [&] {
        if (i1 + 1 >= i2 || i2 + 1 >= n) return;
        if (auto hit = store_.query(a, i1 + 1, i2 - 1, i2 + 1, n - 1))
          scanChunk(cut, store_.chunkAt(a, hit->first), store_.chunkAt(a, hit->second), found);
      });
  if (found.empty()) return std::nullopt;
  return pick(found);
}

void EulerForest::insertEdge(NodeId u, NodeId v) {
  return meter_->scheduled(kInsertRounds, [&] {
    if (u == v) throw PreconditionError("self-loop");
    if (!isActive(u) || !isActive(v)) throw PreconditionError("node not active");
    if (hasEdge(u, v)) throw PreconditionError("edge already present");
    if (degree(u) >= kMaxDegree || degree(v) >= kMaxDegree) throw PreconditionError("degree bound exceeded");
    if (connected(u, v)) {
      addNeighbor(u, v, false);
      addNeighbor(v, u, false);
      linkNonTree(u, v);
      return;
    }
    mergeTrees(u, v);
    finish();
  });
}

ReplacementReport EulerForest::deleteTreeEdge(NodeId u, NodeId v, std::optional<Edge> replacement) {
  if (replacement) {
    removeNeighbor(replacement->u, replacement->v);
    removeNeighbor(replacement->v, replacement->u);
    unlinkNonTree(replacement->u, replacement->v);
  }
  cutTree(u, v);
  if (!replacement) {
    finish();
    return ReplacementReport::split();
  }
  mergeTrees(replacement->u, replacement->v);
  finish();
  return ReplacementReport::replacedBy(*replacement);
}

ReplacementReport EulerForest::deleteNonTreeEdge(NodeId u, NodeId v) {
  removeNeighbor(u, v);
  removeNeighbor(v, u);
  unlinkNonTree(u, v);
  return ReplacementReport::nonTree();
}

ReplacementReport EulerForest::deleteEdge(NodeId u, NodeId v) {
  return meter_->scheduled(kDeleteRounds, [&] {
    if (!isActive(u) || !isActive(v) || !hasEdge(u, v)) throw PreconditionError("edge absent");
    if (!treeEdge(u, v)) return deleteNonTreeEdge(u, v);
    return deleteTreeEdge(u, v, searchReplacement(cutOf(u, v)));
  });
}

ReplacementReport EulerForest::deleteEdgeWithHint(NodeId u, NodeId v, Edge hint) {
  return meter_->scheduled(kDeleteRounds, [&] {
    if (!isActive(u) || !isActive(v) || !hasEdge(u, v)) throw PreconditionError("edge absent");
    if (!isActive(hint.u) || !isActive(hint.v) || !hasEdge(hint.u, hint.v) || treeEdge(hint.u, hint.v))
      throw PreconditionError("hint is not a non-tree edge");
    if (!treeEdge(u, v)) return deleteNonTreeEdge(u, v);
    const Cut cut = cutOf(u, v);
    std::optional<Edge> replacement;
    if (connected(hint.u, u) && inside(cut, hint.u) != inside(cut, hint.v))
      replacement = hint.normalized();
    else
      replacement = searchReplacement(cut);
    return deleteTreeEdge(u, v, replacement);
  });
}

ReplacementReport EulerForest::findReplacement(NodeId u, NodeId v) {
  return meter_->scheduled(kDeleteRounds, [&] {
    if (!isActive(u) || !isActive(v) || !hasEdge(u, v)) throw PreconditionError("edge absent");
    if (!treeEdge(u, v)) return ReplacementReport::nonTree();
    auto replacement = searchReplacement(cutOf(u, v));
    return replacement ? ReplacementReport::replacedBy(*replacement) : ReplacementReport::split();
  });
}

}  // namespace dynconn
