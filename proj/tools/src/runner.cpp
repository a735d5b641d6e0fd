#include "dynconn/tools/runner.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "dynconn/checkers.hpp"
#include "dynconn/oracle.hpp"

namespace dynconn::tools {

WritePolicy policyOf(const RunConfig& config) {
  return config.common ? WritePolicy::common(config.epsilon) : WritePolicy::arbitrary(config.seed);
}

namespace {

std::string where(const TraceOp& op, std::size_t index) {
  std::ostringstream s;
  if (op.line > 0) s << "line " << op.line << " ";
  s << "(op " << index << ", " << name(op.kind) << ")";
  return s.str();
}

std::string boolText(bool b) { return b ? "true" : "false"; }

// Executes one op on the facade and returns its result text.
std::string apply(SparsTree& tree, const TraceOp& op) {
  switch (op.kind) {
    case OpKind::Act: tree.activateNode(op.u); return "";
    case OpKind::Deact: tree.deactivateNode(op.u); return "";
    case OpKind::Ins: tree.insertEdge(op.u, op.v); return "";
    case OpKind::Del: tree.deleteEdge(op.u, op.v); return "";
    case OpKind::Conn: return boolText(tree.connected(op.u, op.v));
    case OpKind::Ncc: return std::to_string(tree.nComponents());
    case OpKind::Tedge: return boolText(tree.treeEdge(op.u, op.v));
    case OpKind::Bip: return boolText(tree.isBipartite());
  }
  return "";
}

void mirror(SimpleGraph& g, const TraceOp& op) {
  switch (op.kind) {
    case OpKind::Act: g.activate(op.u); break;
    case OpKind::Deact: g.deactivate(op.u); break;
    case OpKind::Ins: g.addEdge(op.u, op.v); break;
    case OpKind::Del: g.removeEdge(op.u, op.v); break;
    default: break;
  }
}

// Empty when the answer matches the reference graph.
std::string disagreement(const SparsTree& tree, const SimpleGraph& g, const TraceOp& op, const std::string& got) {
  std::string want;
  switch (op.kind) {
    case OpKind::Conn: want = boolText(bfConnected(g, op.u, op.v)); break;
    case OpKind::Ncc: want = std::to_string(bfComponents(g)); break;
    case OpKind::Bip: want = boolText(bfBipartite(g)); break;
    case OpKind::Tedge: {
      if (!g.hasEdge(op.u, op.v)) return got == "false" ? "" : "tree edge reported for an absent edge";
      // A bridge lies in every spanning forest.
      SimpleGraph without = g;
      without.removeEdge(op.u, op.v);
      if (!bfConnected(without, op.u, op.v) && got != "true") return "bridge not reported as a tree edge";
      return "";
    }
    default: {
      if (tree.edgeCount() != g.edgeCount()) return "edge count " + std::to_string(tree.edgeCount());
      return "";
    }
  }
  return got == want ? "" : "answered " + got + ", oracle says " + want;
}

}  // namespace

void raisePeaks(TranslationPeaks& into, const TranslationPeaks& from) {
  into.connInsert.raiseTo(from.connInsert);
  into.connDelete.raiseTo(from.connDelete);
  into.gadgetEndpoint = std::max(into.gadgetEndpoint, from.gadgetEndpoint);
  into.gadgetTotal = std::max(into.gadgetTotal, from.gadgetTotal);
  into.distance2 = std::max(into.distance2, from.distance2);
  into.distance2Counts.raiseTo(from.distance2Counts);
}

std::vector<MeasurementRow> runTrace(const std::vector<TraceOp>& ops, const RunConfig& config,
                                     TranslationPeaks* peaks) {
  const std::size_t n = config.n ? config.n : impliedNodeCount(ops);
  CostMeter meter(policyOf(config));
  SparsTree tree(n, config.mode, meter);
  SimpleGraph ref(config.check == Check::None ? 0 : n);
  std::vector<MeasurementRow> rows;
  rows.reserve(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const TraceOp& op = ops[i];
    if (op.u >= static_cast<NodeId>(n) || op.v >= static_cast<NodeId>(n))
      throw RunError(2, where(op, i) + ": node id beyond " + std::to_string(n));
    meter.reset();
    std::string result;
    try {
      result = apply(tree, op);
    } catch (const PreconditionError& e) {
      throw RunError(2, where(op, i) + ": " + e.what());
    } catch (const ContractViolation& e) {
      throw RunError(3, where(op, i) + ": internal invariant failed: " + e.what());
    }
    rows.push_back(MeasurementRow{i, op.kind, meter.work(), meter.depth(), result});
    if (config.check == Check::None) continue;
    mirror(ref, op);
    if (auto why = disagreement(tree, ref, op, result); !why.empty())
      throw RunError(2, where(op, i) + ": oracle mismatch: " + why);
    if (config.check == Check::Invariants)
      if (auto report = checkSparsification(tree, ref); !report)
        throw RunError(3, where(op, i) + ": invariant check failed: " + report.message);
  }
  if (peaks) raisePeaks(*peaks, tree.translationPeaks());
  return rows;
}

void writeCsv(std::ostream& out, const std::vector<MeasurementRow>& rows, const RunConfig& config) {
  out << "opIndex,opKind,work,depth,result,nodesN,model,epsilon,seed\n";
  std::ostringstream tail;
  tail << ',' << (config.common ? "common" : "arbitrary") << ',' << config.epsilon << ',' << config.seed << '\n';
  const std::string suffix = tail.str();
  for (const auto& r : rows)
    out << r.opIndex << ',' << name(r.kind) << ',' << r.work << ',' << r.depth << ',' << r.result << ',' << config.n
        << suffix;
}

std::uint64_t percentile(std::vector<std::uint64_t> values, double p) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

double fitSlope(const std::vector<ScalePoint>& points, std::size_t from) {
  if (points.size() < from + 2) return 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto k = static_cast<double>(points.size() - from);
  for (std::size_t i = from; i < points.size(); ++i) {
    const double x = std::log2(static_cast<double>(points[i].n));
    const double y = std::log2(static_cast<double>(std::max<std::uint64_t>(points[i].p99Work, 1)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

ScaleReport scalingRun(const ScaleConfig& config) {
  ScaleReport report;
  std::map<OpKind, std::uint64_t> depthOf;
  for (std::size_t idx = 0; idx < config.nList.size(); ++idx) {
    const std::size_t n = config.nList[idx];
    RunConfig run = config.run;
    run.n = n;
    const auto ops = generateTrace(n, config.ops, config.mix, config.run.seed + idx, run.mode);
    const auto rows = runTrace(ops, run);
    ScalePoint point;
    point.n = n;
    std::map<OpKind, std::vector<std::uint64_t>> work;
    std::map<OpKind, std::uint64_t> depth;
    std::vector<std::uint64_t> measured;
    for (const auto& r : rows) {
      work[r.kind].push_back(r.work);
      depth[r.kind] = std::max(depth[r.kind], r.depth);
      if (isUpdate(r.kind) || isQuery(r.kind)) {
        measured.push_back(r.work);
        point.maxDepth = std::max(point.maxDepth, r.depth);
      }
    }
    for (auto& [kind, values] : work) {
      KindStats s{kind, values.size(), percentile(values, 0.5), percentile(values, 0.99),
                  *std::max_element(values.begin(), values.end()), depth[kind]};
      point.kinds.push_back(s);
      auto [it, fresh] = depthOf.try_emplace(kind, s.maxDepth);
      if (!fresh && it->second != s.maxDepth) report.depthConstant = false;
    }
    point.p99Work = percentile(measured, 0.99);
    report.points.push_back(std::move(point));
  }
  report.slope = fitSlope(report.points, report.points.size() / 2);
  return report;
}

void writeReport(std::ostream& out, const ScaleReport& report, const ScaleConfig& config) {
  const RunConfig& run = config.run;
  out << "# mode " << (run.mode == Mode::Connectivity ? "conn" : "bip") << ", model "
      << (run.common ? "common" : "arbitrary") << ", epsilon " << run.epsilon << ", seed " << run.seed << ", ops "
      << config.ops << "\n";
  out << "# slope bounds with slack: common 0.5 + epsilon + 0.15, arbitrary 0.70\n";
  out << "n,opKind,count,p50Work,p99Work,maxWork,maxDepth\n";
  for (const auto& p : report.points)
    for (const auto& k : p.kinds)
      out << p.n << ',' << name(k.kind) << ',' << k.count << ',' << k.p50 << ',' << k.p99 << ',' << k.maxWork << ','
          << k.maxDepth << '\n';
  out << "# p99 work over updates and queries:";
  for (const auto& p : report.points) out << ' ' << p.n << '=' << p.p99Work;
  out << "\n# slope " << std::fixed << std::setprecision(4) << report.slope << " (largest half of the sizes)\n";
  out << "# depth " << (report.depthConstant ? "identical" : "varies") << " across sizes\n";
}

}  // namespace dynconn::tools
