#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dynconn/sparsify.hpp"
#include "dynconn/tools/trace.hpp"

namespace dynconn::tools {

/// Op proportions. `node` toggles node activity (only isolated nodes are
/// deactivated).
struct Mix {
  double ins = 0.5;
  double del = 0.2;
  double query = 0.3;
  double node = 0.0;
};

/// Parses "ins:p,del:q,query:r[,node:s]"; the proportions must sum to 1.
Mix parseMix(const std::string& text);

/// Activates all n nodes, then emits `ops` valid operations. Identical
/// arguments give identical traces.
std::vector<TraceOp> generateTrace(std::size_t n, std::size_t ops, const Mix& mix, std::uint64_t seed,
                                   Mode mode = Mode::Connectivity);

}  // namespace dynconn::tools
