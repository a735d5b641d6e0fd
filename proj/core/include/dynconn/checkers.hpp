#pragma once

#include <string>

#include "dynconn/agg_tree.hpp"
#include "dynconn/chunk_store.hpp"
#include "dynconn/conn_general.hpp"
#include "dynconn/euler_forest.hpp"
#include "dynconn/oracle.hpp"
#include "dynconn/sparsify.hpp"

namespace dynconn {

/// Outcome of a structural invariant check; `message` names the first
/// violated invariant.
struct CheckReport {
  bool ok = true;
  std::string message;

  explicit operator bool() const { return ok; }
  static CheckReport fail(std::string why) { return CheckReport{false, std::move(why)}; }
};

/// Degrees within [2,6] (the root may have fewer), all leaves at height 0 of
/// a balanced tree, every inner vertex the OR of its children, consistent
/// ancestor arrays and first/last leaf pointers.
CheckReport checkAggTree(const AggTree& tree);

/// Link symmetry, zero columns for free slots, slot ownership, back
/// pointers, aggregate-tree mirrors of every array, and slots held exactly
/// by chunks of multi-chunk arrays.
CheckReport checkChunks(const ChunkStore& store);

/// Every chunk array spells a valid Euler tour of one tree, occurrence
/// pointers match chunk contents, at most one chunk per array is below K/2,
/// the component counter is consistent, and (with groundTruthLinks) every
/// link vector equals a brute-force recomputation.
CheckReport checkEulerTour(const EulerForest& forest, bool groundTruthLinks = true);

/// Gadget sizes match host degrees, every cross edge is present, and each
/// gadget cycle is spanned by exactly k-1 of its own tree edges.
CheckReport checkGadgets(const ConnGeneral& g);

/// Sparsification tree against the graph it stores: leaves hold their own
/// edge, every other base graph is the union of its children's spanning
/// forests, tree status along each edge's path is an initial segment, base
/// graphs stay within 4 edges per node, path counters and materialization
/// agree, and the bipartiteness flags match brute force.
CheckReport checkSparsification(const SparsTree& tree, const SimpleGraph& graph);

}  // namespace dynconn
