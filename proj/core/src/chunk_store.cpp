#include "dynconn/chunk_store.hpp"

#include <algorithm>

namespace dynconn {

ChunkStore::ChunkStore(std::size_t chunkCapacity, std::size_t slotCount, CostMeter& meter)
    : K_(chunkCapacity), J_(slotCount), meter_(&meter), slotOwner_(slotCount, kNoChunk), arena_(slotCount, meter) {
  if (K_ < 2 || J_ == 0) throw PreconditionError("chunk capacity must be at least 2 and slot count positive");
  freeSlots_.reserve(J_);
  for (std::size_t s = J_; s-- > 0;) freeSlots_.push_back(static_cast<SlotId>(s));
}

ChunkId ChunkStore::createChunk(std::vector<TourEdge> edges) {
  if (edges.size() > K_) throw PreconditionError("chunk exceeds its capacity");
  ChunkId c;
  if (!freeChunks_.empty()) {
    c = freeChunks_.back();
    freeChunks_.pop_back();
  } else {
    c = static_cast<ChunkId>(chunks_.size());
    chunks_.emplace_back();
  }
  Chunk& x = chunks_[static_cast<std::size_t>(c)];
  x = Chunk{};
  x.edges = std::move(edges);
  x.links = BitArray(J_);
  x.live = true;
  ++liveChunks_;
  meter_->parallelUniform(x.edges.size(), 1);
  return c;
}

void ChunkStore::destroyChunk(ChunkId c) {
  Chunk& x = mut(c);
  if (x.array != kNoArray || x.slot != kNoSlot) throw PreconditionError("destroying an attached chunk");
  x = Chunk{};
  freeChunks_.push_back(c);
  --liveChunks_;
  meter_->charge(1);
}

const Chunk& ChunkStore::chunk(ChunkId c) const {
  if (c < 0 || static_cast<std::size_t>(c) >= chunks_.size() || !chunks_[static_cast<std::size_t>(c)].live)
    throw PreconditionError("inactive chunk");
  return chunks_[static_cast<std::size_t>(c)];
}

Chunk& ChunkStore::mut(ChunkId c) { return const_cast<Chunk&>(std::as_const(*this).chunk(c)); }

std::vector<TourEdge>& ChunkStore::edgesOf(ChunkId c) { return mut(c).edges; }

const ChunkStore::ChunkArray& ChunkStore::array(ArrayId a) const {
  if (a < 0 || static_cast<std::size_t>(a) >= arrays_.size() || !arrays_[static_cast<std::size_t>(a)].live)
    throw PreconditionError("inactive chunk array");
  return arrays_[static_cast<std::size_t>(a)];
}

ChunkStore::ChunkArray& ChunkStore::arrayMut(ArrayId a) { return const_cast<ChunkArray&>(std::as_const(*this).array(a)); }

BitArray ChunkStore::leafValue(ChunkId c) const {
  const Chunk& x = chunk(c);
  return x.slot == kNoSlot ? BitArray(J_) : x.links;
}

SlotId ChunkStore::setChunk(ChunkId c) {
  Chunk& x = mut(c);
  if (x.slot != kNoSlot) throw PreconditionError("chunk already holds a slot");
  if (freeSlots_.empty()) throw ContractViolation("master array has no free slot");
  const SlotId s = freeSlots_.back();
  freeSlots_.pop_back();
  slotOwner_[static_cast<std::size_t>(s)] = c;
  x.slot = s;
  x.links = BitArray(J_);
  meter_->parallelUniform(J_, 1);
  return s;
}

void ChunkStore::deactivate(ChunkId c) {
  const SlotId s = chunk(c).slot;
  if (s == kNoSlot) throw PreconditionError("chunk holds no slot");
  bool stale = false;
  meter_->parallelFor(J_, [&](std::size_t j) {
    meter_->charge(1);
    const ChunkId o = slotOwner_[j];
    if (o != kNoChunk && o != c && chunks_[static_cast<std::size_t>(o)].links.test(static_cast<std::size_t>(s)))
      stale = true;
  });
  if (stale) throw ContractViolation("deactivated chunk is still linked from another chunk");
  Chunk& x = mut(c);
  x.links = BitArray(J_);
  if (x.array != kNoArray) arrayMut(x.array).tree.bulkSet(x.position, x.links);
  x.slot = kNoSlot;
  slotOwner_[static_cast<std::size_t>(s)] = kNoChunk;
  freeSlots_.push_back(s);
}

void ChunkStore::setColumnBit(ChunkId owner, SlotId column, bool b) {
  Chunk& x = mut(owner);
  x.links.set(static_cast<std::size_t>(column), b);
  if (x.array != kNoArray) arrayMut(x.array).tree.bitSet(x.position, static_cast<std::size_t>(column), b);
}

void ChunkStore::link(ChunkId a, ChunkId b) {
  const SlotId sa = chunk(a).slot, sb = chunk(b).slot;
  if (sa == kNoSlot || sb == kNoSlot) throw PreconditionError("linking a chunk without a slot");
  meter_->parallelInvoke([&] { setColumnBit(a, sb, true); }, [&] { setColumnBit(b, sa, true); });
}

void ChunkStore::unlink(ChunkId a, ChunkId b) {
  const SlotId sa = chunk(a).slot, sb = chunk(b).slot;
  if (sa == kNoSlot || sb == kNoSlot) throw PreconditionError("unlinking a chunk without a slot");
  meter_->parallelInvoke([&] { setColumnBit(a, sb, false); }, [&] { setColumnBit(b, sa, false); });
}

void ChunkStore::bulkSetLinks(ChunkId c, const BitArray& bits) {
  if (bits.width() != J_) throw PreconditionError("link vector width differs from J");
  const SlotId s = chunk(c).slot;
  if (s == kNoSlot) throw PreconditionError("chunk holds no slot");
  const auto column = static_cast<std::size_t>(s);
  const ArrayId home = chunk(c).array;

  std::vector<std::size_t> ones, zeros;
  std::vector<std::pair<ChunkId, bool>> foreign;
  meter_->parallelFor(J_, [&](std::size_t j) {
    meter_->charge(2);
    const ChunkId o = slotOwner_[j];
    const bool want = bits.test(j);
    if (o == kNoChunk) {
      if (want) throw PreconditionError("link to a free slot");
      return;
    }
    if (o == c) return;
    Chunk& x = chunks_[static_cast<std::size_t>(o)];
    if (x.links.test(column) == want) return;
    x.links.set(column, want);
    if (x.array == home)
      (want ? ones : zeros).push_back(x.position);
    else if (x.array != kNoArray)
      foreign.emplace_back(o, want);
  });

  Chunk& x = mut(c);
  x.links = bits;
  if (home != kNoArray) {
    AggTree& t = arrayMut(home).tree;
    t.bulkSet(x.position, bits);
    t.dualBulkSet(ones, column, true);
    t.dualBulkSet(zeros, column, false);
  } else {
    meter_->parallelUniform(J_, 1);
  }
  meter_->parallelFor(foreign.size(), [&](std::size_t k) {
    const Chunk& y = chunk(foreign[k].first);
    arrayMut(y.array).tree.bitSet(y.position, column, foreign[k].second);
  });
}

ArrayId ChunkStore::createArray() {
  ArrayId a;
  if (!freeArrays_.empty()) {
    a = freeArrays_.back();
    freeArrays_.pop_back();
  } else {
    a = static_cast<ArrayId>(arrays_.size());
    arrays_.push_back(ChunkArray{{}, AggTree(arena_), false});
  }
  arrays_[static_cast<std::size_t>(a)].live = true;
  meter_->charge(1);
  return a;
}

void ChunkStore::destroyArray(ArrayId a) {
  ChunkArray& A = arrayMut(a);
  if (!A.order.empty()) throw PreconditionError("destroying a nonempty chunk array");
  A.tree = AggTree(arena_);
  A.live = false;
  freeArrays_.push_back(a);
}

ChunkId ChunkStore::chunkAt(ArrayId a, std::size_t i) const {
  const ChunkArray& A = array(a);
  if (i >= A.order.size()) throw PreconditionError("chunk position out of range");
  return A.order[i];
}

std::vector<ArrayId> ChunkStore::liveArrays() const {
  std::vector<ArrayId> out;
  for (std::size_t a = 0; a < arrays_.size(); ++a)
    if (arrays_[a].live) out.push_back(static_cast<ArrayId>(a));
  return out;
}

void ChunkStore::renumber(ArrayId a, std::size_t from) {
  ChunkArray& A = arrayMut(a);
  meter_->parallelFor(A.order.size() - std::min(from, A.order.size()), [&](std::size_t q) {
    meter_->charge(2);
    Chunk& x = chunks_[static_cast<std::size_t>(A.order[from + q])];
    x.array = a;
    x.position = from + q;
  });
}

void ChunkStore::insertChunk(ArrayId a, std::size_t i, ChunkId c) {
  ChunkArray& A = arrayMut(a);
  if (i > A.order.size()) throw PreconditionError("insert position out of range");
  if (chunk(c).array != kNoArray) throw PreconditionError("chunk already belongs to an array");
  A.order.insert(A.order.begin() + static_cast<std::ptrdiff_t>(i), c);
  renumber(a, i);
  A.tree.treeInsert(i, leafValue(c));
}

ChunkId ChunkStore::deleteChunk(ArrayId a, std::size_t i) {
  ChunkArray& A = arrayMut(a);
  if (i >= A.order.size()) throw PreconditionError("delete position out of range");
  const ChunkId c = A.order[i];
  A.order.erase(A.order.begin() + static_cast<std::ptrdiff_t>(i));
  renumber(a, i);
  A.tree.treeDelete(i);
  Chunk& x = mut(c);
  x.array = kNoArray;
  x.position = 0;
  return c;
}

void ChunkStore::concatenate(ArrayId a1, ArrayId a2) {
  if (a1 == a2) throw PreconditionError("concatenating an array with itself");
  ChunkArray& A = arrayMut(a1);
  ChunkArray& B = arrayMut(a2);
  const std::size_t offset = A.order.size();
  A.order.insert(A.order.end(), B.order.begin(), B.order.end());
  B.order.clear();
  renumber(a1, offset);
  A.tree = AggTree::treeJoin(std::move(A.tree), std::move(B.tree));
  destroyArray(a2);
}

ArrayId ChunkStore::split(ArrayId a, std::size_t i) {
  if (i > length(a)) throw PreconditionError("split position out of range");
  const ArrayId b = createArray();
  ChunkArray& A = arrayMut(a);
  ChunkArray& B = arrayMut(b);
  if (i == A.order.size()) {
    meter_->parallelUniform(0, 0);
    return b;
  }
  B.order.assign(A.order.begin() + static_cast<std::ptrdiff_t>(i), A.order.end());
  A.order.resize(i);
  auto parts = AggTree::treeSplit(std::move(A.tree), i);
  A.tree = std::move(parts.left);
  B.tree = AggTree::treeJoin(AggTree::singleton(arena_, std::move(parts.bits)), std::move(parts.right));
  renumber(b, 0);
  return b;
}

void ChunkStore::reorder(ArrayId a, std::size_t i, std::size_t j, std::size_t k) {
  if (!(i < j && j < k && k <= length(a))) throw PreconditionError("reorder requires i < j < k <= length");
  const ArrayId tail = split(a, k);
  const ArrayId second = split(a, j);
  const ArrayId first = split(a, i);
  concatenate(a, second);
  concatenate(a, first);
  concatenate(a, tail);
}

std::optional<std::pair<std::size_t, std::size_t>> ChunkStore::query(ArrayId a, std::size_t i, std::size_t j,
                                                                     std::size_t k, std::size_t l) {
  ChunkArray& A = arrayMut(a);
  const std::size_t n = A.order.size();
  if (!(i <= j && j < n && k <= l && l < n)) throw PreconditionError("malformed query intervals");

  // Cut [i, j] out of the tree so that its root holds the OR over it, then
  // put the pieces back.
  BitArray span(J_);
  auto first = AggTree::treeSplit(std::move(A.tree), i);
  AggTree middle = AggTree::treeJoin(AggTree::singleton(arena_, std::move(first.bits)), std::move(first.right));
  if (j + 1 < n) {
    auto second = AggTree::treeSplit(std::move(middle), j + 1 - i);
    span = second.left.rootBits();
    AggTree rest = AggTree::treeJoin(AggTree::singleton(arena_, std::move(second.bits)), std::move(second.right));
    middle = AggTree::treeJoin(std::move(second.left), std::move(rest));
  } else {
    span = middle.rootBits();
  }
  A.tree = AggTree::treeJoin(std::move(first.left), std::move(middle));

  auto slotOf = [&](std::size_t pos) { return chunks_[static_cast<std::size_t>(A.order[pos])].slot; };
  std::vector<char> hitQ(l - k + 1, 0);
  meter_->parallelFor(hitQ.size(), [&](std::size_t q) {
    meter_->charge(2);
    const SlotId s = slotOf(k + q);
    hitQ[q] = s != kNoSlot && span.test(static_cast<std::size_t>(s));
  });
  const auto q = chooseAny(hitQ, *meter_);
  if (!q) return std::nullopt;
  const BitArray& row = chunks_[static_cast<std::size_t>(A.order[k + *q])].links;
  std::vector<char> hitP(j - i + 1, 0);
  meter_->parallelFor(hitP.size(), [&](std::size_t p) {
    meter_->charge(2);
    const SlotId s = slotOf(i + p);
    hitP[p] = s != kNoSlot && row.test(static_cast<std::size_t>(s));
  });
  const auto p = chooseAny(hitP, *meter_);
  if (!p) throw ContractViolation("aggregate tree reports a link that no chunk holds");
  return std::pair{i + *p, k + *q};
}

void ChunkStore::normalizeSlots(ArrayId a, const std::function<BitArray(ChunkId)>& computeLinks) {
  const std::vector<ChunkId> members = order(a);
  if (members.size() == 1) {
    const ChunkId c = members.front();
    if (chunk(c).slot != kNoSlot) {
      bulkSetLinks(c, BitArray(J_));
      deactivate(c);
    }
    return;
  }
  std::vector<ChunkId> fresh;
  meter_->parallelFor(members.size(), [&](std::size_t q) {
    meter_->charge(1);
    if (chunk(members[q]).slot == kNoSlot) fresh.push_back(members[q]);
  });
  meter_->parallelFor(fresh.size(), [&](std::size_t q) { setChunk(fresh[q]); });
  std::vector<BitArray> rows(fresh.size());
  meter_->parallelFor(fresh.size(), [&](std::size_t q) { rows[q] = computeLinks(fresh[q]); });
  for (std::size_t q = 0; q < fresh.size(); ++q) bulkSetLinks(fresh[q], rows[q]);
}

}  // namespace dynconn
