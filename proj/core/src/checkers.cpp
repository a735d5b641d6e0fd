#include "dynconn/checkers.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace dynconn {

CheckReport checkAggTree(const AggTree& tree) {
  const AggArena& arena = tree.arena();
  if (tree.empty()) {
    if (tree.leafCount() != 0 || tree.treeHeight() != -1) return CheckReport::fail("empty tree with leaves");
    return {};
  }
  const int H = tree.treeHeight();
  std::vector<VertexId> seen;
  std::string error;
  // Returns (first leaf, last leaf) of the subtree.
  std::function<bool(VertexId, int, bool)> walk = [&](VertexId v, int height, bool isRoot) {
    const AggVertex& x = arena.vertex(v);
    if (!x.live) return error = "dead vertex reachable", false;
    if (x.height != height) return error = "vertex height mismatch", false;
    if (height == 0) {
      seen.push_back(v);
      if (x.fst != v || x.lst != v) return error = "leaf fst/lst", false;
      return true;
    }
    if (x.degree > kMaxDegree || (!isRoot && x.degree < kMinDegree) || (isRoot && x.degree < 2))
      return error = "degree out of range at height " + std::to_string(height), false;
    BitArray acc(arena.width());
    for (int c = 0; c < x.degree; ++c) {
      VertexId ch = x.child[static_cast<std::size_t>(c)];
      if (!walk(ch, height - 1, false)) return false;
      acc |= arena.vertex(ch).bits;
    }
    if (!(acc == x.bits)) return error = "inner vertex is not the OR of its children", false;
    if (x.fst != arena.vertex(x.child[0]).fst) return error = "fst pointer", false;
    if (x.lst != arena.vertex(x.child[static_cast<std::size_t>(x.degree - 1)]).lst) return error = "lst pointer", false;
    for (int c = 0; c < x.degree; ++c) {
      // Every leaf below must name v as its ancestor at this height.
      const AggVertex& f = arena.vertex(arena.vertex(x.child[static_cast<std::size_t>(c)]).fst);
      if (f.anc.size() <= static_cast<std::size_t>(height) || f.anc[static_cast<std::size_t>(height)] != v)
        return error = "ancestor array disagrees with the tree", false;
    }
    return true;
  };
  if (!walk(tree.root(), H, true)) return CheckReport::fail(error);
  if (seen != tree.leaves()) return CheckReport::fail("leaf order differs from the leaf list");
  for (VertexId leaf : seen) {
    const auto& anc = arena.vertex(leaf).anc;
    if (anc.size() != static_cast<std::size_t>(H + 1) || anc[0] != leaf || anc.back() != tree.root())
      return CheckReport::fail("ancestor array shape");
    for (int h = 1; h <= H; ++h) {
      const AggVertex& a = arena.vertex(anc[static_cast<std::size_t>(h)]);
      const VertexId below = anc[static_cast<std::size_t>(h - 1)];
      bool found = false;
      for (int c = 0; c < a.degree; ++c) found |= a.child[static_cast<std::size_t>(c)] == below;
      if (!found) return CheckReport::fail("ancestor chain broken");
    }
  }
  return {};
}

CheckReport checkChunks(const ChunkStore& store) {
  const std::size_t J = store.J();
  for (std::size_t s = 0; s < J; ++s) {
    const ChunkId o = store.slotOwner(static_cast<SlotId>(s));
    if (o == kNoChunk) continue;
    const Chunk& c = store.chunk(o);
    if (c.slot != static_cast<SlotId>(s)) return CheckReport::fail("slot owner disagrees with chunk slot");
    for (std::size_t t = 0; t < J; ++t) {
      const ChunkId p = store.slotOwner(static_cast<SlotId>(t));
      if (p == kNoChunk) {
        if (c.links.test(t)) return CheckReport::fail("link into a free slot");
        continue;
      }
      if (c.links.test(t) != store.chunk(p).links.test(s))
        return CheckReport::fail("link matrix not symmetric at slot " + std::to_string(s) + ", bit " + std::to_string(t));
    }
  }
  for (ArrayId a : store.liveArrays()) {
    const auto& order = store.order(a);
    const AggTree& tree = store.tree(a);
    if (auto r = checkAggTree(tree); !r) return CheckReport::fail("array tree: " + r.message);
    if (tree.leafCount() != order.size()) return CheckReport::fail("array tree size differs from its order");
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Chunk& c = store.chunk(order[i]);
      if (c.array != a || c.position != i) return CheckReport::fail("chunk back pointer");
      if (c.edges.empty() || c.edges.size() > store.K()) return CheckReport::fail("chunk size outside [1,K]");
      const bool wantSlot = order.size() >= 2;
      if ((c.slot != kNoSlot) != wantSlot) return CheckReport::fail("slot held by a lone chunk or missing");
      const BitArray expect = c.slot == kNoSlot ? BitArray(J) : c.links;
      if (!(tree.leafBits(i) == expect)) return CheckReport::fail("array tree leaf differs from link vector");
    }
  }
  return {};
}

CheckReport checkEulerTour(const EulerForest& forest, bool groundTruthLinks) {
  const ChunkStore& store = forest.store();
  if (auto r = checkChunks(store); !r) return r;
  const std::size_t n = forest.capacity();
  std::size_t directed = 0, arrays = 0;
  std::vector<std::vector<ChunkId>> chunksOf(n);
  for (ArrayId a : store.liveArrays()) {
    ++arrays;
    std::vector<TourEdge> tour;
    std::size_t under = 0;
    for (ChunkId c : store.order(a)) {
      const auto& edges = store.chunk(c).edges;
      if (2 * edges.size() < store.K()) ++under;
      for (std::size_t off = 0; off < edges.size(); ++off) {
        const TourEdge& e = edges[off];
        if (!forest.isActive(e.from) || !forest.isActive(e.to) || !forest.treeEdge(e.from, e.to))
          return CheckReport::fail("tour edge is not a tree edge");
        if (forest.locate(e.from, e.to) != std::pair{c, off}) return CheckReport::fail("occurrence pointer is stale");
        if (forest.treeArray(e.from) != a) return CheckReport::fail("tree identity disagrees with the tour");
        chunksOf[static_cast<std::size_t>(e.from)].push_back(c);
        chunksOf[static_cast<std::size_t>(e.to)].push_back(c);
        tour.push_back(e);
      }
    }
    if (store.length(a) > 1 && under > 1) return CheckReport::fail("more than one chunk below K/2 in a tour");
    if (tour.size() < 2) return CheckReport::fail("tour shorter than one edge pair");
    std::set<std::pair<NodeId, NodeId>> seen;
    std::set<NodeId> members;
    for (std::size_t i = 0; i < tour.size(); ++i) {
      if (tour[i].to != tour[(i + 1) % tour.size()].from) return CheckReport::fail("consecutive tour edges do not meet");
      if (!seen.insert({tour[i].from, tour[i].to}).second) return CheckReport::fail("tour edge repeated");
      members.insert(tour[i].from);
    }
    for (const auto& [x, y] : seen)
      if (!seen.count({y, x})) return CheckReport::fail("tour edge without its reverse");
    if (tour.size() != 2 * (members.size() - 1)) return CheckReport::fail("tour length differs from 2(nodes-1)");
    directed += tour.size();
  }
  if (directed != 2 * forest.treeEdgeCount()) return CheckReport::fail("tree edge counter disagrees with the tours");
  std::size_t singletons = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const auto x = static_cast<NodeId>(v);
    if (!forest.isActive(x)) continue;
    if (forest.treeArray(x) == kNoArray) ++singletons;
  }
  if (arrays + singletons != forest.nComponents()) return CheckReport::fail("component counter disagrees with the tours");
  if (!groundTruthLinks) return {};

  std::map<std::pair<ChunkId, ChunkId>, bool> truth;
  for (std::size_t v = 0; v < n; ++v) {
    const auto x = static_cast<NodeId>(v);
    if (!forest.isActive(x)) continue;
    for (NodeId w : forest.neighbors(x)) {
      if (forest.treeEdge(x, w)) continue;
      for (ChunkId c : chunksOf[v])
        for (ChunkId d : chunksOf[static_cast<std::size_t>(w)]) truth[{c, d}] = true;
    }
  }
  for (std::size_t s = 0; s < store.J(); ++s) {
    const ChunkId c = store.slotOwner(static_cast<SlotId>(s));
    if (c == kNoChunk) continue;
    for (std::size_t t = 0; t < store.J(); ++t) {
      const ChunkId d = store.slotOwner(static_cast<SlotId>(t));
      if (d == kNoChunk) continue;
      if (store.chunk(c).links.test(t) != (truth.count({c, d}) > 0))
        return CheckReport::fail("link vector differs from ground truth at slot " + std::to_string(s) + ", bit " +
                                 std::to_string(t));
    }
  }
  return {};
}

CheckReport checkGadgets(const ConnGeneral& g) {
  const EulerForest& inner = g.inner();
  std::size_t used = 0, isolated = 0, edges = 0;
  for (std::size_t i = 0; i < g.capacity(); ++i) {
    const auto u = static_cast<NodeId>(i);
    if (!g.isActive(u)) continue;
    const auto cycle = g.gadget(u);
    const std::size_t d = g.degree(u);
    used += cycle.size();
    edges += d;
    if (d == 0) ++isolated;
    if (cycle.size() != std::max<std::size_t>(d, 1)) return CheckReport::fail("gadget size differs from host degree");
    for (NodeId x : cycle)
      if (g.hostOf(x) != u || !inner.isActive(x)) return CheckReport::fail("gadget node with wrong owner");
    for (NodeId w : g.neighbors(u)) {
      const NodeId x = g.gadgetNode(u, w);
      if (std::find(cycle.begin(), cycle.end(), x) == cycle.end()) return CheckReport::fail("edge endpoint outside gadget");
      if (!inner.hasEdge(x, g.gadgetNode(w, u))) return CheckReport::fail("missing cross edge");
    }
    std::size_t treeEdges = 0;
    const std::size_t k = cycle.size();
    for (std::size_t j = 0; j < k && k >= 2; ++j) {
      if (k == 2 && j == 1) break;
      const NodeId a = cycle[j], b = cycle[(j + 1) % k];
      if (!inner.hasEdge(a, b)) return CheckReport::fail("missing cycle edge");
      treeEdges += inner.treeEdge(a, b);
    }
    for (NodeId x : cycle)
      if (inner.degree(x) != (k == 1 ? 0 : k == 2 ? 1 : 2) + (d > 0 ? 1 : 0))
        return CheckReport::fail("gadget node with extra inner edges");
    if (k >= 2 && treeEdges != k - 1) return CheckReport::fail("gadget cycle not spanned by its tree edges");
  }
  if (used != inner.activeCount()) return CheckReport::fail("inner node count differs from gadget sizes");
  if (edges != 2 * g.edgeCount()) return CheckReport::fail("edge counter off");
  if (isolated != g.isolatedCount()) return CheckReport::fail("isolated counter off");
  return {};
}

namespace {

bool spansTree(const SparsNode& node, NodeId x, NodeId y) {
  const auto a = node.local.find(x), b = node.local.find(y);
  return a != node.local.end() && b != node.local.end() && node.conn->treeEdge(a->second, b->second);
}

SimpleGraph baseGraph(const SparsNode& node, std::size_t n) {
  SimpleGraph g(n);
  for (auto [v, id] : node.local) g.activate(v);
  for (auto [x, y] : node.baseEdges) g.addEdge(x, y);
  return g;
}

}  // namespace

CheckReport checkSparsification(const SparsTree& tree, const SimpleGraph& graph) {
  const std::size_t n = tree.size();
  const int L = tree.partition().depth();
  const SparsNode* root = tree.find(tree.rootKey());
  if (!root) return CheckReport::fail("root missing");
  if (tree.edgeCount() != graph.edgeCount()) return CheckReport::fail("edge count differs");

  std::map<SparsKey, std::size_t> expected;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = static_cast<NodeId>(i);
    if (tree.isActive(x) != graph.isActive(x)) return CheckReport::fail("activity differs");
    if ((root->local.count(x) > 0) != graph.isActive(x)) return CheckReport::fail("root misses an active node");
    for (NodeId y : graph.neighbors(x)) {
      if (y < x) continue;
      const auto path = tree.keyPath(x, y);
      std::size_t firstNonTree = path.size();
      for (std::size_t i2 = 0; i2 < path.size(); ++i2) {
        ++expected[path[i2]];
        const SparsNode* node = tree.find(path[i2]);
        if (!node) return CheckReport::fail("node on an edge path not materialized");
        const bool inBase = node->baseEdges.count({x, y}) > 0;
        const bool isTree = inBase && spansTree(*node, x, y);
        if (i2 == 0 && !isTree) return CheckReport::fail("edge not a tree edge of its leaf");
        if (isTree && firstNonTree < i2) return CheckReport::fail("tree status not an initial segment");
        if (!isTree && firstNonTree == path.size()) firstNonTree = i2;
        if (inBase && !isTree && firstNonTree < i2) return CheckReport::fail("edge stored above its first non-tree level");
      }
    }
  }

  for (const auto& [key, node] : tree.nodes()) {
    const bool isRoot = key == tree.rootKey();
    const auto want = expected.count(key) ? expected.at(key) : 0;
    if (node.pathEdges != want) return CheckReport::fail("path counter off at level " + std::to_string(key.level));
    if (!isRoot && want == 0) return CheckReport::fail("idle node kept");
    if (node.baseEdges.size() > 4 * std::max<std::size_t>(node.vertexCount, 1))
      return CheckReport::fail("base graph too large");
    if (node.conn->edgeCount() != node.baseEdges.size()) return CheckReport::fail("forest edge count differs");
    for (auto [v, id] : node.local) {
      if (node.global.at(static_cast<std::size_t>(id)) != v) return CheckReport::fail("local id table broken");
      if (!isRoot && node.baseDegree.at(static_cast<std::size_t>(id)) == 0)
        return CheckReport::fail("isolated node kept attached");
    }
    if (key.level == L) {
      if (node.baseEdges.size() != 1 || node.pathEdges != 1) return CheckReport::fail("leaf does not hold its edge");
    } else {
      std::set<std::pair<NodeId, NodeId>> united;
      for (const SparsKey& c : tree.children(key))
        if (const SparsNode* child = tree.find(c))
          for (auto [x, y] : child->baseEdges)
            if (spansTree(*child, x, y)) united.emplace(x, y);
      if (united != node.baseEdges) return CheckReport::fail("base graph differs from children's forests");
    }
    const SimpleGraph base = baseGraph(node, n);
    if (node.conn->nComponents() != bfComponents(base)) return CheckReport::fail("spanning forest count off");
    if (tree.mode() == Mode::Bipartiteness) {
      if (node.ownBit != bfBipartite(base)) return CheckReport::fail("own bipartiteness bit stale");
      bool flag = node.ownBit;
      for (const SparsKey& c : tree.children(key))
        if (const SparsNode* child = tree.find(c)) flag = flag && child->subtreeFlag;
      if (flag != node.subtreeFlag) return CheckReport::fail("subtree flag stale");
    }
  }
  if (root->conn->nComponents() != bfComponents(graph)) return CheckReport::fail("root components differ");
  return {};
}

}  // namespace dynconn
