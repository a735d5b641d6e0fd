#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dynconn/agg_tree.hpp"
#include "dynconn/bit_array.hpp"
#include "dynconn/cost_model.hpp"

namespace dynconn {

using NodeId = std::int32_t;
using ChunkId = std::int32_t;
using ArrayId = std::int32_t;
using SlotId = std::int32_t;
inline constexpr ChunkId kNoChunk = -1;
inline constexpr ArrayId kNoArray = -1;
inline constexpr SlotId kNoSlot = -1;

/// Directed Euler-tour edge.
struct TourEdge {
  NodeId from = -1;
  NodeId to = -1;
  friend bool operator==(const TourEdge&, const TourEdge&) = default;
};

struct Chunk {
  std::vector<TourEdge> edges;
  ArrayId array = kNoArray;
  std::size_t position = 0;
  // Master slot, held only while the chunk shares its array with others.
  SlotId slot = kNoSlot;
  BitArray links;
  bool live = false;
};

/// Master array of edge chunks plus the chunk arrays of all Euler tours.
///
/// Positions are 0-based. A chunk holds a master slot (and thus a link
/// vector column) only while its array has at least two chunks: a tour made
/// of one chunk never needs to be searched for links.
class ChunkStore {
 public:
  ChunkStore(std::size_t chunkCapacity, std::size_t slotCount, CostMeter& meter);
  ChunkStore(const ChunkStore&) = delete;
  ChunkStore& operator=(const ChunkStore&) = delete;

  std::size_t K() const { return K_; }
  std::size_t J() const { return J_; }
  CostMeter& meter() const { return *meter_; }

  ChunkId createChunk(std::vector<TourEdge> edges);
  /// Frees a chunk that is detached from every array and holds no slot.
  void destroyChunk(ChunkId c);
  const Chunk& chunk(ChunkId c) const;
  std::vector<TourEdge>& edgesOf(ChunkId c);
  std::size_t liveChunks() const { return liveChunks_; }

  // Master slots.
  SlotId setChunk(ChunkId c);
  void deactivate(ChunkId c);
  ChunkId slotOwner(SlotId s) const { return slotOwner_.at(static_cast<std::size_t>(s)); }
  std::size_t freeSlots() const { return freeSlots_.size(); }
  void link(ChunkId a, ChunkId b);
  void unlink(ChunkId a, ChunkId b);
  void bulkSetLinks(ChunkId c, const BitArray& bits);

  // Chunk arrays.
  ArrayId createArray();
  void destroyArray(ArrayId a);
  std::size_t length(ArrayId a) const { return array(a).order.size(); }
  ChunkId chunkAt(ArrayId a, std::size_t i) const;
  const std::vector<ChunkId>& order(ArrayId a) const { return array(a).order; }
  const AggTree& tree(ArrayId a) const { return array(a).tree; }
  std::vector<ArrayId> liveArrays() const;

  void insertChunk(ArrayId a, std::size_t i, ChunkId c);
  /// Detaches and returns the chunk at position i.
  ChunkId deleteChunk(ArrayId a, std::size_t i);
  /// Appends a2 to a1; a2 is destroyed.
  void concatenate(ArrayId a1, ArrayId a2);
  /// a keeps positions [0, i); the returned new array holds [i, length).
  ArrayId split(ArrayId a, std::size_t i);
  /// [0,i) [i,j) [j,k) [k,end) becomes [0,i) [j,k) [i,j) [k,end).
  void reorder(ArrayId a, std::size_t i, std::size_t j, std::size_t k);

  /// Positions (p, q) with p in [i, j], q in [k, l] whose chunks are linked.
  /// Common picks the lowest q, then the lowest p.
  std::optional<std::pair<std::size_t, std::size_t>> query(ArrayId a, std::size_t i, std::size_t j, std::size_t k,
                                                          std::size_t l);

  /// Gives every chunk of a multi-chunk array a slot and drops the slot of a
  /// lone chunk. New slots get their link vector from `computeLinks`.
  void normalizeSlots(ArrayId a, const std::function<BitArray(ChunkId)>& computeLinks);

 private:
  struct ChunkArray {
    std::vector<ChunkId> order;
    AggTree tree;
    bool live = false;
  };

  Chunk& mut(ChunkId c);
  const ChunkArray& array(ArrayId a) const;
  ChunkArray& arrayMut(ArrayId a);
  BitArray leafValue(ChunkId c) const;
  void renumber(ArrayId a, std::size_t from);
  void setColumnBit(ChunkId owner, SlotId column, bool b);

  std::size_t K_, J_;
  CostMeter* meter_;
  std::vector<Chunk> chunks_;
  std::vector<ChunkId> freeChunks_;
  std::size_t liveChunks_ = 0;
  std::vector<ChunkId> slotOwner_;
  std::vector<SlotId> freeSlots_;
  AggArena arena_;
  std::vector<ChunkArray> arrays_;
  std::vector<ArrayId> freeArrays_;
};

}  // namespace dynconn
