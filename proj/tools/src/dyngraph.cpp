#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dynconn/tools/runner.hpp"

using namespace dynconn;
using namespace dynconn::tools;

namespace {

const std::map<std::string, Mode> kModes{{"conn", Mode::Connectivity}, {"bip", Mode::Bipartiteness}};
const std::map<std::string, bool> kModels{{"common", true}, {"arbitrary", false}};
const std::map<std::string, Check> kChecks{{"none", Check::None}, {"invariants", Check::Invariants}, {"oracle", Check::Oracle}};

void addModelOptions(CLI::App* cmd, RunConfig& run) {
  cmd->add_option("--mode", run.mode, "conn or bip")->transform(CLI::CheckedTransformer(kModes));
  cmd->add_option("--model", run.common, "common or arbitrary")->transform(CLI::CheckedTransformer(kModels));
  cmd->add_option("--epsilon", run.epsilon, "write-policy epsilon")->check(CLI::Range(0.01, 1.0));
  cmd->add_option("--seed", run.seed, "seed");
}

// Writes to path, or stdout for "-".
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path == "-") return fn(std::cout);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  fn(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic connectivity and bipartiteness harness"};
  app.require_subcommand(1);

  RunConfig run;
  std::string tracePath, csvPath = "-";
  auto* runCmd = app.add_subcommand("run", "replay a trace and write per-op measurements");
  runCmd->add_option("--trace", tracePath, "trace file")->required();
  runCmd->add_option("--n", run.n, "node count (default: largest operand)");
  addModelOptions(runCmd, run);
  runCmd->add_option("--check", run.check, "none, invariants or oracle")->transform(CLI::CheckedTransformer(kChecks));
  runCmd->add_option("--csv", csvPath, "CSV output, - for stdout");

  std::size_t genN = 64, genOps = 500;
  std::uint64_t genSeed = 1;
  std::string mixText = "ins:0.5,del:0.2,query:0.3", outPath = "-";
  Mode genMode = Mode::Connectivity;
  auto* genCmd = app.add_subcommand("gen", "generate a random valid trace");
  genCmd->add_option("--n", genN, "node count")->required()->check(CLI::PositiveNumber);
  genCmd->add_option("--ops", genOps, "operations after activation")->required();
  genCmd->add_option("--mix", mixText, "ins:p,del:q,query:r[,node:s]");
  genCmd->add_option("--seed", genSeed, "seed");
  genCmd->add_option("--mode", genMode, "query flavour, conn or bip")->transform(CLI::CheckedTransformer(kModes));
  genCmd->add_option("--out", outPath, "trace output, - for stdout");

  ScaleConfig scale;
  std::string scaleMix = mixText, reportPath = "-";
  double maxSlope = 0;
  bool needConstantDepth = false;
  auto* scaleCmd = app.add_subcommand("scale", "measure work and depth across sizes");
  scaleCmd->add_option("--n-list", scale.nList, "ascending node counts")->delimiter(',')->required();
  scaleCmd->add_option("--ops", scale.ops, "operations per size");
  scaleCmd->add_option("--mix", scaleMix, "ins:p,del:q,query:r[,node:s]");
  addModelOptions(scaleCmd, scale.run);
  scaleCmd->add_option("--out", reportPath, "report output, - for stdout");
  scaleCmd->add_option("--max-slope", maxSlope, "fail when the fitted slope exceeds this");
  scaleCmd->add_flag("--constant-depth", needConstantDepth, "fail when max depth varies with n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*runCmd) {
      std::vector<TraceOp> ops;
      try {
        ops = readTrace(tracePath, run.n);
      } catch (const TraceError& e) {
        std::cerr << tracePath << ": " << e.what() << "\n";
        return 1;
      }
      if (run.n == 0) run.n = impliedNodeCount(ops);
      const auto rows = runTrace(ops, run);
      emit(csvPath, [&](std::ostream& out) { writeCsv(out, rows, run); });
    } else if (*genCmd) {
      const auto ops = generateTrace(genN, genOps, parseMix(mixText), genSeed, genMode);
      emit(outPath, [&](std::ostream& out) { writeTrace(out, ops); });
    } else if (*scaleCmd) {
      if (!std::is_sorted(scale.nList.begin(), scale.nList.end())) throw std::invalid_argument("--n-list must ascend");
      scale.mix = parseMix(scaleMix);
      const auto report = scalingRun(scale);
      emit(reportPath, [&](std::ostream& out) { writeReport(out, report, scale); });
      if (maxSlope > 0 && report.slope > maxSlope) {
        std::cerr << "slope " << report.slope << " exceeds " << maxSlope << "\n";
        return 2;
      }
      if (needConstantDepth && !report.depthConstant) {
        std::cerr << "max depth varies across sizes\n";
        return 2;
      }
    }
  } catch (const RunError& e) {
    std::cerr << e.what() << "\n";
    return e.exitCode();
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
