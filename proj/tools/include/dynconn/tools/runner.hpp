#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynconn/sparsify.hpp"
#include "dynconn/tools/trace.hpp"
#include "dynconn/tools/workload.hpp"

namespace dynconn::tools {

enum class Check { None, Invariants, Oracle };

struct RunConfig {
  Mode mode = Mode::Connectivity;
  bool common = true;
  double epsilon = 0.25;
  std::uint64_t seed = 1;
  Check check = Check::None;
  std::size_t n = 0;  // 0: implied by the trace
};

WritePolicy policyOf(const RunConfig& config);

struct MeasurementRow {
  std::size_t opIndex = 0;
  OpKind kind = OpKind::Ncc;
  std::uint64_t work = 0;
  std::uint64_t depth = 0;
  std::string result;
};

/// Failure while replaying a trace. exitCode 2 marks a rejected operation or
/// an oracle mismatch, 3 a broken internal invariant.
class RunError : public std::runtime_error {
 public:
  RunError(int exitCode, const std::string& what) : std::runtime_error(what), exitCode_(exitCode) {}
  int exitCode() const { return exitCode_; }

 private:
  int exitCode_;
};

/// Replays ops on a fresh facade, resetting the meter before every op. When
/// peaks is given, it is raised to the facade's translation peaks.
std::vector<MeasurementRow> runTrace(const std::vector<TraceOp>& ops, const RunConfig& config,
                                     TranslationPeaks* peaks = nullptr);
void raisePeaks(TranslationPeaks& into, const TranslationPeaks& from);
void writeCsv(std::ostream& out, const std::vector<MeasurementRow>& rows, const RunConfig& config);

struct KindStats {
  OpKind kind = OpKind::Ncc;
  std::size_t count = 0;
  std::uint64_t p50 = 0, p99 = 0, maxWork = 0, maxDepth = 0;
};

struct ScalePoint {
  std::size_t n = 0;
  std::vector<KindStats> kinds;
  // Over all edge updates and queries.
  std::uint64_t p99Work = 0;
  std::uint64_t maxDepth = 0;
};

struct ScaleConfig {
  std::vector<std::size_t> nList{256, 1024, 4096, 16384};
  std::size_t ops = 2000;
  Mix mix{};
  RunConfig run{};
};

struct ScaleReport {
  std::vector<ScalePoint> points;
  double slope = 0;  // over the largest half of the sizes
  bool depthConstant = true;
};

std::uint64_t percentile(std::vector<std::uint64_t> values, double p);
/// Least-squares slope of log2(p99Work) against log2(n) over points[from..].
double fitSlope(const std::vector<ScalePoint>& points, std::size_t from = 0);
ScaleReport scalingRun(const ScaleConfig& config);
void writeReport(std::ostream& out, const ScaleReport& report, const ScaleConfig& config);

}  // namespace dynconn::tools
