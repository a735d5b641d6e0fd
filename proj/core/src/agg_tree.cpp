#include "dynconn/agg_tree.hpp"

#include <algorithm>
#include <utility>

namespace dynconn {

VertexId AggArena::allocate(int height) {
  VertexId v;
  if (!free_.empty()) {
    v = free_.back();
    free_.pop_back();
  } else {
    v = static_cast<VertexId>(vertices_.size());
    vertices_.emplace_back();
    override_.push_back(kNoVertex);
    dissolved_.push_back(0);
  }
  AggVertex& x = at(v);
  x = AggVertex{};
  x.height = height;
  x.bits = BitArray(width_);
  x.live = true;
  ++live_;
  meter_->noteSpace(live_ * (width_ / 64 + 8));
  return v;
}

void AggArena::release(VertexId v) {
  AggVertex& x = at(v);
  if (!x.live) throw ContractViolation("double release of an aggregate-tree vertex");
  x = AggVertex{};
  dissolved_[static_cast<std::size_t>(v)] = 0;
  free_.push_back(v);
  --live_;
}

AggTree::AggTree(AggTree&& other) noexcept
    : arena_(other.arena_), root_(other.root_), height_(other.height_), leaves_(std::move(other.leaves_)) {
  other.root_ = kNoVertex;
  other.height_ = -1;
  other.leaves_.clear();
}

AggTree& AggTree::operator=(AggTree&& other) noexcept {
  if (this != &other) {
    releaseAll();
    arena_ = other.arena_;
    root_ = std::exchange(other.root_, kNoVertex);
    height_ = std::exchange(other.height_, -1);
    leaves_ = std::move(other.leaves_);
    other.leaves_.clear();
  }
  return *this;
}

AggTree::~AggTree() { releaseAll(); }

void AggTree::releaseAll() {
  if (root_ == kNoVertex) return;
  std::vector<VertexId> all;
  for (VertexId x : leaves_) {
    const auto& anc = arena_->vertex(x).anc;
    for (std::size_t h = 1; h < anc.size(); ++h) {
      const AggVertex& a = arena_->vertex(anc[h]);
      // Count each inner vertex once, from its first leaf.
      if (a.fst == x) all.push_back(anc[h]);
    }
    all.push_back(x);
  }
  for (VertexId v : all) arena_->release(v);
  root_ = kNoVertex;
  height_ = -1;
  leaves_.clear();
}

AggTree AggTree::singleton(AggArena& arena, BitArray bits) {
  if (bits.width() != arena.width()) throw PreconditionError("bit array width differs from the tree width");
  AggTree t(arena);
  VertexId v = arena.allocate(0);
  AggVertex& x = arena.at(v);
  x.bits = std::move(bits);
  x.fst = x.lst = v;
  x.anc = {v};
  arena.meter().parallelUniform(arena.width(), 1);
  t.root_ = v;
  t.height_ = 0;
  t.leaves_ = {v};
  return t;
}

void AggTree::checkPosition(std::size_t i) const {
  if (i >= leaves_.size()) throw PreconditionError("leaf position out of range");
}

VertexId AggTree::leaf(std::size_t i) const {
  checkPosition(i);
  return leaves_[i];
}

VertexId AggTree::treeAnc(std::size_t i, int level) const {
  checkPosition(i);
  if (level < 0 || level > height_) throw PreconditionError("ancestor level out of range");
  return arena_->vertex(leaves_[i]).anc[static_cast<std::size_t>(level)];
}

const BitArray& AggTree::bitArray(VertexId v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= arena_->vertices_.size() || !arena_->vertex(v).live)
    throw PreconditionError("unknown aggregate-tree vertex");
  return arena_->vertex(v).bits;
}

BitArray AggTree::rootBits() const {
  if (root_ == kNoVertex) return BitArray(arena_->width());
  return arena_->vertex(root_).bits;
}

std::vector<BitArray> AggTree::leafSequence() const {
  std::vector<BitArray> out;
  out.reserve(leaves_.size());
  for (VertexId x : leaves_) out.push_back(arena_->vertex(x).bits);
  return out;
}

// Hangs the subtree roots of groups[h] (each of height h - 1) onto the spine
// of the tree rooted at the single root in groups[top]; Right attaches along
// the right spine, Left along the left one. Leaves of the result are given in
// order. A leaf's old ancestor at height h is considered gone when h exceeds
// its old height or the vertex is marked dissolved.
//
// Each level h is handled independently: the spine vertex s_h receives its
// groups and, if the level below overflowed, the new sibling s'_{h-1}.
// Overflows are carries: level h overflows iff some level j <= h has at least
// seven entries and every level in (j, h] has exactly six, which is evaluated
// for all pairs in constant depth.
AggTree AggTree::attach(AggArena& arena, Side side, int lo, int top,
                        const std::vector<std::vector<VertexId>>& groups, std::vector<VertexId> leaves) {
  CostMeter& m = arena.meter();
  const std::size_t width = arena.width();
  const bool right = side == Side::Right;
  const std::size_t levels = static_cast<std::size_t>(top - lo + 1);
  auto V = [&](VertexId v) -> AggVertex& { return arena.at(v); };
  const auto topSize = static_cast<std::size_t>(top + 1);

  // Nearest nonempty group level above each level.
  std::vector<int> nearest(topSize, -1);
  m.parallelFor(levels * levels, [&](std::size_t p) {
    const int h = lo + static_cast<int>(p / levels);
    const int hp = lo + static_cast<int>(p % levels);
    m.charge(1);
    if (hp <= h || groups[static_cast<std::size_t>(hp)].empty()) return;
    bool blocked = false;
    m.parallelFor(static_cast<std::size_t>(hp - h - 1), [&](std::size_t q) {
      m.charge(1);
      if (!groups[static_cast<std::size_t>(h + 1) + q].empty()) blocked = true;
    });
    if (!blocked) nearest[static_cast<std::size_t>(h)] = hp;
  });

  std::vector<VertexId> spine(topSize, kNoVertex);
  const VertexId R = arena.allocate(top);
  spine[static_cast<std::size_t>(top)] = R;
  m.parallelFor(levels - 1, [&](std::size_t q) {
    const int h = lo + static_cast<int>(q);
    m.charge(3);
    const auto& g = groups[static_cast<std::size_t>(nearest[static_cast<std::size_t>(h)])];
    const VertexId src = right ? g.back() : g.front();
    if (V(src).height == h) {
      spine[static_cast<std::size_t>(h)] = src;
    } else {
      const VertexId edge = right ? V(src).lst : V(src).fst;
      spine[static_cast<std::size_t>(h)] = V(edge).anc[static_cast<std::size_t>(h)];
    }
  });

  // Carry lookahead.
  std::vector<int> load(topSize, 0);
  m.parallelFor(levels, [&](std::size_t q) {
    const auto h = static_cast<std::size_t>(lo) + q;
    m.charge(2);
    load[h] = V(spine[h]).degree + static_cast<int>(groups[h].size());
  });
  std::vector<char> split(topSize, 0);
  m.parallelFor(levels * levels, [&](std::size_t p) {
    const auto h = static_cast<std::size_t>(lo) + p / levels;
    const auto j = static_cast<std::size_t>(lo) + p % levels;
    m.charge(1);
    if (j > h || load[j] <= kMaxDegree) return;
    bool broken = false;
    m.parallelFor(h - j, [&](std::size_t q) {
      m.charge(1);
      if (load[j + 1 + q] != kMaxDegree) broken = true;
    });
    if (!broken) split[h] = 1;
  });
  if (split[static_cast<std::size_t>(top)]) throw ContractViolation("attach overflowed the new root");

  std::vector<VertexId> sib(topSize, kNoVertex);
  m.parallelFor(levels, [&](std::size_t q) {
    const auto h = static_cast<std::size_t>(lo) + q;
    m.charge(1);
    if (split[h]) sib[h] = arena.allocate(static_cast<int>(h));
  });

  // Combined child lists and their distribution over s_h and s'_h.
  struct Level {
    std::array<VertexId, 2 * kMaxDegree + 1> entry{};
    int t = 0;
    int keepLo = 0, keepHi = 0;  // range of entries kept by s_h
  };
  std::vector<Level> plan(topSize);
  m.parallelFor(levels, [&](std::size_t q) {
    const auto h = static_cast<std::size_t>(lo) + q;
    Level& L = plan[h];
    const AggVertex& s = V(spine[h]);
    const bool carry = h > static_cast<std::size_t>(lo) && split[h - 1];
    auto push = [&](VertexId v) { L.entry[static_cast<std::size_t>(L.t++)] = v; };
    if (right) {
      for (int c = 0; c < s.degree; ++c) push(s.child[static_cast<std::size_t>(c)]);
      for (VertexId g : groups[h]) push(g);
      if (carry) push(sib[h - 1]);
    } else {
      if (carry) push(sib[h - 1]);
      for (VertexId g : groups[h]) push(g);
      for (int c = 0; c < s.degree; ++c) push(s.child[static_cast<std::size_t>(c)]);
    }
    m.charge(static_cast<std::uint64_t>(L.t));
    if (!split[h]) {
      L.keepLo = 0;
      L.keepHi = L.t;
    } else {
      const int keep = (L.t + 1) / 2;
      L.keepLo = right ? 0 : L.t - keep;
      L.keepHi = right ? keep : L.t;
    }
    // Old vertices whose parent changes.
    m.parallelFor(static_cast<std::size_t>(L.t), [&](std::size_t e) {
      m.charge(1);
      const VertexId v = L.entry[e];
      const bool kept = static_cast<int>(e) >= L.keepLo && static_cast<int>(e) < L.keepHi;
      const bool isGroup = std::find(groups[h].begin(), groups[h].end(), v) != groups[h].end();
      const bool isCarry = carry && v == sib[h - 1];
      if (isCarry) return;
      if (isGroup || !kept) {
        arena.override_[static_cast<std::size_t>(v)] = kept ? spine[h] : sib[h];
        arena.overrideTouched_.push_back(v);
      }
    });
  });

  // G[h]: OR of every group array at levels lo..h.
  std::vector<std::pair<std::size_t, VertexId>> allGroups;
  for (std::size_t h = static_cast<std::size_t>(lo); h < topSize; ++h)
    for (VertexId g : groups[h]) allGroups.emplace_back(h, g);
  std::vector<BitArray> G(topSize, BitArray(width));
  m.parallelFor(levels, [&](std::size_t q) {
    const auto h = static_cast<std::size_t>(lo) + q;
    m.parallelFor(allGroups.size(), [&](std::size_t k) {
      m.charge(1);
      if (allGroups[k].first > h) return;
      G[h] |= V(allGroups[k].second).bits;
      m.parallelUniform(width, 1);
    });
  });

  const VertexId globalEdge = right ? V(groups[static_cast<std::size_t>(lo)].back()).lst
                                    : V(groups[static_cast<std::size_t>(lo)].front()).fst;
  struct Fresh {
    BitArray bits;
    VertexId fst = kNoVertex, lst = kNoVertex;
  };
  std::vector<Fresh> freshSpine(topSize), freshSib(topSize);
  m.parallelFor(levels, [&](std::size_t q) {
    const auto h = static_cast<std::size_t>(lo) + q;
    const Level& L = plan[h];
    auto entry = [&](int e) { return L.entry[static_cast<std::size_t>(e)]; };
    Fresh& a = freshSpine[h];
    if (!split[h]) {
      a.bits = V(spine[h]).bits;
      a.bits |= G[h];
      m.parallelUniform(width, 2);
      a.fst = right ? V(entry(0)).fst : globalEdge;
      a.lst = right ? globalEdge : V(entry(L.t - 1)).lst;
      return;
    }
    a.bits = BitArray(width);
    m.parallelFor(static_cast<std::size_t>(L.keepHi - L.keepLo), [&](std::size_t e) {
      a.bits |= V(entry(L.keepLo + static_cast<int>(e))).bits;
      m.parallelUniform(width, 1);
    });
    a.fst = V(entry(L.keepLo)).fst;
    a.lst = V(entry(L.keepHi - 1)).lst;

    Fresh& b = freshSib[h];
    b.bits = BitArray(width);
    const bool below = h > static_cast<std::size_t>(lo);
    const VertexId lower = below ? spine[h - 1] : kNoVertex;
    const VertexId lowerSib = below ? sib[h - 1] : kNoVertex;
    const int sibLo = right ? L.keepHi : 0;
    const int sibHi = right ? L.t : L.keepLo;
    m.parallelFor(static_cast<std::size_t>(sibHi - sibLo), [&](std::size_t e) {
      const VertexId v = entry(sibLo + static_cast<int>(e));
      m.charge(1);
      if (v == lower || v == lowerSib) return;
      b.bits |= V(v).bits;
      m.parallelUniform(width, 1);
    });
    if (below) {
      b.bits |= V(lower).bits;
      b.bits |= G[h - 1];
      m.parallelUniform(width, 2);
    }
    b.fst = right ? V(entry(sibLo)).fst : globalEdge;
    b.lst = right ? globalEdge : V(entry(sibHi - 1)).lst;
  });

  // Ancestor arrays of every leaf, from the old arrays and the level plans.
  std::vector<std::vector<VertexId>> newAnc(leaves.size());
  m.parallelFor(leaves.size(), [&](std::size_t li) {
    const std::vector<VertexId>& old = V(leaves[li]).anc;
    std::vector<VertexId>& na = newAnc[li];
    na.assign(topSize, kNoVertex);
    na[0] = leaves[li];
    auto gone = [&](std::size_t h) {
      return h >= old.size() || arena.dissolved_[static_cast<std::size_t>(old[h])];
    };
    m.parallelFor(static_cast<std::size_t>(top), [&](std::size_t q) {
      const std::size_t h = q + 1;
      m.charge(3);
      if (!gone(h)) {
        const VertexId o = arena.override_[static_cast<std::size_t>(old[h - 1])];
        na[h] = o != kNoVertex ? o : old[h];
      } else if (!gone(h - 1)) {
        na[h] = arena.override_[static_cast<std::size_t>(old[h - 1])];
        if (na[h] == kNoVertex) throw ContractViolation("attach lost the parent of a group root");
      } else {
        na[h] = split[h] ? sib[h] : spine[h];
      }
    });
  });

  // Commit.
  m.parallelFor(levels, [&](std::size_t q) {
    const auto h = static_cast<std::size_t>(lo) + q;
    const Level& L = plan[h];
    m.charge(2 * static_cast<std::uint64_t>(L.t));
    AggVertex& s = V(spine[h]);
    s.degree = 0;
    for (int e = L.keepLo; e < L.keepHi; ++e) s.child[static_cast<std::size_t>(s.degree++)] = L.entry[static_cast<std::size_t>(e)];
    s.bits = std::move(freshSpine[h].bits);
    s.fst = freshSpine[h].fst;
    s.lst = freshSpine[h].lst;
    if (split[h]) {
      AggVertex& t = V(sib[h]);
      t.degree = 0;
      for (int e = 0; e < L.t; ++e)
        if (e < L.keepLo || e >= L.keepHi) t.child[static_cast<std::size_t>(t.degree++)] = L.entry[static_cast<std::size_t>(e)];
      t.bits = std::move(freshSib[h].bits);
      t.fst = freshSib[h].fst;
      t.lst = freshSib[h].lst;
    }
    m.parallelUniform(width, 1);
  });
  m.parallelFor(leaves.size(), [&](std::size_t li) {
    m.charge(topSize);
    V(leaves[li]).anc = std::move(newAnc[li]);
  });
  for (VertexId v : arena.overrideTouched_) arena.override_[static_cast<std::size_t>(v)] = kNoVertex;
  arena.overrideTouched_.clear();

  AggTree out(arena);
  out.leaves_ = std::move(leaves);
  if (V(R).degree == 1) {
    out.root_ = V(R).child[0];
    out.height_ = top - 1;
    arena.release(R);
    m.parallelFor(out.leaves_.size(), [&](std::size_t li) {
      m.charge(1);
      V(out.leaves_[li]).anc.pop_back();
    });
  } else {
    out.root_ = R;
    out.height_ = top;
    m.parallelUniform(out.leaves_.size(), 1);
  }
  return out;
}

AggTree AggTree::treeJoin(AggTree left, AggTree right) {
  if (left.arena_ != right.arena_) throw PreconditionError("joined trees live in different arenas");
  if (left.empty()) return right;
  if (right.empty()) return left;
  AggArena& arena = *left.arena_;
  CostMeter& m = arena.meter();
  const int h1 = left.height_, h2 = right.height_;

  std::vector<VertexId> leaves;
  leaves.reserve(left.leaves_.size() + right.leaves_.size());
  leaves.insert(leaves.end(), left.leaves_.begin(), left.leaves_.end());
  leaves.insert(leaves.end(), right.leaves_.begin(), right.leaves_.end());
  m.parallelUniform(leaves.size(), 1);

  const int top = std::max(h1, h2) + 1;
  const int lo = std::min(h1, h2) + 1;
  std::vector<std::vector<VertexId>> groups(static_cast<std::size_t>(top + 1));
  Side side = Side::Right;
  if (h1 == h2) {
    groups[static_cast<std::size_t>(top)] = {left.root_, right.root_};
  } else if (h1 > h2) {
    groups[static_cast<std::size_t>(top)] = {left.root_};
    groups[static_cast<std::size_t>(lo)] = {right.root_};
  } else {
    side = Side::Left;
    groups[static_cast<std::size_t>(top)] = {right.root_};
    groups[static_cast<std::size_t>(lo)] = {left.root_};
  }
  for (AggTree* t : {&left, &right}) {
    t->root_ = kNoVertex;
    t->height_ = -1;
    t->leaves_.clear();
  }
  return attach(arena, side, lo, top, groups, std::move(leaves));
}

AggTree::SplitResult AggTree::treeSplit(AggTree tree, std::size_t i) {
  tree.checkPosition(i);
  AggArena& arena = *tree.arena_;
  CostMeter& m = arena.meter();
  const int H = tree.height_;
  const auto levels = static_cast<std::size_t>(H + 1);
  const VertexId x = tree.leaves_[i];
  const std::vector<VertexId> path = arena.vertex(x).anc;

  std::vector<std::vector<VertexId>> leftGroups(levels), rightGroups(levels);
  m.parallelFor(static_cast<std::size_t>(H), [&](std::size_t q) {
    const std::size_t h = q + 1;
    const AggVertex& p = arena.vertex(path[h]);
    m.charge(kMaxDegree);
    auto below = std::find(p.child.begin(), p.child.begin() + p.degree, path[h - 1]);
    leftGroups[h].assign(p.child.begin(), below);
    rightGroups[h].assign(below + 1, p.child.begin() + p.degree);
    arena.dissolved_[static_cast<std::size_t>(path[h])] = 1;
  });

  // Lowest and highest nonempty group levels of each side.
  auto bounds = [&](const std::vector<std::vector<VertexId>>& groups) {
    int lo = -1, top = -1;
    m.parallelUniform(levels * levels, 1);
    for (std::size_t h = 1; h < levels; ++h) {
      if (groups[h].empty()) continue;
      if (lo < 0) lo = static_cast<int>(h);
      top = static_cast<int>(h);
    }
    return std::pair{lo, top};
  };
  const auto [loL, topL] = bounds(leftGroups);
  const auto [loR, topR] = bounds(rightGroups);

  std::vector<VertexId> leftLeaves(tree.leaves_.begin(), tree.leaves_.begin() + static_cast<std::ptrdiff_t>(i));
  std::vector<VertexId> rightLeaves(tree.leaves_.begin() + static_cast<std::ptrdiff_t>(i) + 1, tree.leaves_.end());
  m.parallelUniform(tree.leaves_.size(), 1);

  SplitResult out{AggTree(arena), AggTree(arena), BitArray(arena.width())};
  m.parallelInvoke(
      [&] {
        if (loL > 0) out.left = attach(arena, Side::Right, loL, topL, leftGroups, std::move(leftLeaves));
      },
      [&] {
        if (loR > 0) out.right = attach(arena, Side::Left, loR, topR, rightGroups, std::move(rightLeaves));
      });

  out.bits = std::move(arena.at(x).bits);
  m.parallelUniform(levels, 1);
  for (VertexId v : path) arena.release(v);
  tree.root_ = kNoVertex;
  tree.height_ = -1;
  tree.leaves_.clear();
  return out;
}

void AggTree::treeInsert(std::size_t i, BitArray bits) {
  if (i > leaves_.size()) throw PreconditionError("insert position out of range");
  AggArena& arena = *arena_;
  if (i == leaves_.size()) {
    *this = treeJoin(std::move(*this), singleton(arena, std::move(bits)));
    return;
  }
  SplitResult parts = treeSplit(std::move(*this), i);
  AggTree head = treeJoin(std::move(parts.left), singleton(arena, std::move(bits)));
  AggTree tail = treeJoin(singleton(arena, std::move(parts.bits)), std::move(parts.right));
  *this = treeJoin(std::move(head), std::move(tail));
}

void AggTree::treeDelete(std::size_t i) {
  checkPosition(i);
  SplitResult parts = treeSplit(std::move(*this), i);
  *this = treeJoin(std::move(parts.left), std::move(parts.right));
}

void AggTree::bitSet(std::size_t i, std::size_t j, bool b) {
  checkPosition(i);
  if (j >= arena_->width()) throw PreconditionError("bit index out of range");
  CostMeter& m = arena_->meter();
  const std::vector<VertexId> path = arena_->vertex(leaves_[i]).anc;
  arena_->at(path[0]).bits.set(j, b);
  // Ancestor at height h: b, or bit j of some off-path child at heights <= h.
  m.parallelFor(static_cast<std::size_t>(height_), [&](std::size_t q) {
    const std::size_t h = q + 1;
    bool any = false;
    m.parallelFor(h * kMaxDegree, [&](std::size_t p) {
      const std::size_t l = p / kMaxDegree + 1;
      const auto c = static_cast<int>(p % kMaxDegree);
      m.charge(1);
      const AggVertex& a = arena_->vertex(path[l]);
      if (c >= a.degree) return;
      const VertexId ch = a.child[static_cast<std::size_t>(c)];
      if (ch != path[l - 1] && arena_->vertex(ch).bits.test(j)) any = true;
    });
    arena_->at(path[h]).bits.set(j, b || any);
  });
}

void AggTree::bulkSet(std::size_t i, const BitArray& bits) {
  checkPosition(i);
  if (bits.width() != arena_->width()) throw PreconditionError("bit array width differs from the tree width");
  CostMeter& m = arena_->meter();
  const std::size_t width = arena_->width();
  const std::vector<VertexId> path = arena_->vertex(leaves_[i]).anc;
  const auto H = static_cast<std::size_t>(height_);

  // side[l]: OR of the off-path children of the path vertex at height l.
  std::vector<BitArray> side(H + 1, BitArray(width));
  m.parallelFor(H * kMaxDegree, [&](std::size_t p) {
    const std::size_t l = p / kMaxDegree + 1;
    const auto c = static_cast<int>(p % kMaxDegree);
    m.charge(1);
    const AggVertex& a = arena_->vertex(path[l]);
    if (c >= a.degree) return;
    const VertexId ch = a.child[static_cast<std::size_t>(c)];
    if (ch == path[l - 1]) return;
    side[l] |= arena_->vertex(ch).bits;
    m.parallelUniform(width, 1);
  });
  arena_->at(path[0]).bits = bits;
  m.parallelUniform(width, 1);
  m.parallelFor(H, [&](std::size_t q) {
    const std::size_t h = q + 1;
    BitArray acc = bits;
    m.parallelFor(h, [&](std::size_t l) {
      acc |= side[l + 1];
      m.parallelUniform(width, 1);
    });
    arena_->at(path[h]).bits = std::move(acc);
  });
}

void AggTree::dualBulkSet(std::span<const std::size_t> positions, std::size_t j, bool b) {
  if (j >= arena_->width()) throw PreconditionError("bit index out of range");
  for (std::size_t i : positions) checkPosition(i);
  CostMeter& m = arena_->meter();
  const std::size_t n = leaves_.size();
  const auto levels = static_cast<std::size_t>(height_ + 1);

  std::vector<char> inU(n, 0);
  m.parallelFor(positions.size(), [&](std::size_t k) {
    m.charge(1);
    inU[positions[k]] = 1;
  });
  // Leaves whose bit must end up set.
  std::vector<char> target(n, 0);
  m.parallelFor(n, [&](std::size_t i) {
    m.charge(2);
    target[i] = b ? inU[i] : (!inU[i] && arena_->vertex(leaves_[i]).bits.test(j));
  });
  m.parallelFor(n * levels, [&](std::size_t p) {
    m.charge(1);
    if (!b) arena_->at(arena_->vertex(leaves_[p / levels]).anc[p % levels]).bits.reset(j);
  });
  m.parallelFor(n * levels, [&](std::size_t p) {
    m.charge(1);
    if (target[p / levels]) arena_->at(arena_->vertex(leaves_[p / levels]).anc[p % levels]).bits.set(j);
  });
}

}  // namespace dynconn
