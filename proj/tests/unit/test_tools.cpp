#include <gtest/gtest.h>

#include <sstream>

#include "dynconn/tools/runner.hpp"

using namespace dynconn;
using namespace dynconn::tools;

namespace {

std::vector<TraceOp> parse(const std::string& text, std::size_t n = 0) {
  std::istringstream in(text);
  return parseTrace(in, n);
}

std::string render(const std::vector<TraceOp>& ops) {
  std::ostringstream out;
  writeTrace(out, ops);
  return out.str();
}

}  // namespace

TEST(Trace, ParsesAllKindsAndComments) {
  const auto ops = parse("# header\nact 1\nact 2 # trailing\n\nins 1 2\nconn 2 1\nncc\ntedge 1 2\nbip\ndel 1 2\ndeact 2\n");
  ASSERT_EQ(ops.size(), 9u);
  EXPECT_EQ(ops[0].kind, OpKind::Act);
  EXPECT_EQ(ops[0].u, 0);
  EXPECT_EQ(ops[0].line, 2u);
  EXPECT_EQ(ops[2].kind, OpKind::Ins);
  EXPECT_EQ(ops[2].v, 1);
  EXPECT_EQ(ops[4].kind, OpKind::Ncc);
  EXPECT_EQ(render(ops), "act 1\nact 2\nins 1 2\nconn 2 1\nncc\ntedge 1 2\nbip\ndel 1 2\ndeact 2\n");
  EXPECT_EQ(impliedNodeCount(ops), 2u);
}

TEST(Trace, ErrorsCiteTheLine) {
  auto lineOf = [](const std::string& text, std::size_t n = 0) -> std::size_t {
    try {
      parse(text, n);
    } catch (const TraceError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(lineOf("act 1\nfoo\n"), 2u);
  EXPECT_EQ(lineOf("act 1\nact 2\nins 1\n"), 3u);
  EXPECT_EQ(lineOf("ncc 4\n"), 1u);
  EXPECT_EQ(lineOf("act 0\n"), 1u);
  EXPECT_EQ(lineOf("act x\n"), 1u);
  EXPECT_EQ(lineOf("act 1\nact 9\n", 8), 2u);
}

TEST(Workload, MixParsing) {
  const Mix m = parseMix("ins:0.6,del:0.1,query:0.3");
  EXPECT_DOUBLE_EQ(m.ins, 0.6);
  EXPECT_DOUBLE_EQ(m.node, 0.0);
  EXPECT_THROW(parseMix("ins:0.6,del:0.1"), std::invalid_argument);
  EXPECT_THROW(parseMix("ins:0.5,foo:0.5"), std::invalid_argument);
  EXPECT_THROW(parseMix("ins:1.5,del:-0.5"), std::invalid_argument);
  EXPECT_THROW(parseMix("ins0.5"), std::invalid_argument);
}

TEST(Workload, SameSeedSameTrace) {
  const Mix mix = parseMix("ins:0.4,del:0.2,query:0.3,node:0.1");
  EXPECT_EQ(render(generateTrace(30, 400, mix, 7)), render(generateTrace(30, 400, mix, 7)));
  EXPECT_NE(render(generateTrace(30, 400, mix, 7)), render(generateTrace(30, 400, mix, 8)));
}

TEST(Workload, NoDeletionsMeansMonotoneEdges) {
  const auto ops = generateTrace(20, 300, parseMix("ins:0.7,del:0,query:0.3"), 3);
  for (const auto& op : ops) EXPECT_NE(op.kind, OpKind::Del);
}

TEST(Workload, GeneratedTracesReplayCleanly) {
  const Mix mix = parseMix("ins:0.4,del:0.25,query:0.25,node:0.1");
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    RunConfig config;
    config.n = 12;
    config.seed = seed;
    config.mode = seed % 4 == 0 ? Mode::Bipartiteness : Mode::Connectivity;
    const auto ops = generateTrace(12, 40, mix, seed, config.mode);
    ASSERT_NO_THROW(runTrace(ops, config)) << "seed " << seed;
  }
}

TEST(Runner, SmallTraceAnswersTrue) {
  RunConfig config;
  const auto ops = parse("act 1\nact 2\nins 1 2\nconn 1 2\n");
  config.n = impliedNodeCount(ops);
  const auto rows = runTrace(ops, config);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows.back().result, "true");
  std::ostringstream csv;
  writeCsv(csv, rows, config);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "opIndex,opKind,work,depth,result,nodesN,model,epsilon,seed");
  EXPECT_NE(csv.str().find("\n3,conn,"), std::string::npos);
}

TEST(Runner, RejectedOpIsAVerificationFailure) {
  RunConfig config;
  try {
    runTrace(parse("act 1\nact 2\ndel 1 2\n"), config);
    FAIL() << "no error";
  } catch (const RunError& e) {
    EXPECT_EQ(e.exitCode(), 2);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Runner, OracleAndInvariantChecksPass) {
  const auto ops = generateTrace(24, 300, parseMix("ins:0.5,del:0.2,query:0.3"), 11);
  for (Check check : {Check::Oracle, Check::Invariants}) {
    RunConfig config;
    config.check = check;
    config.n = 24;
    EXPECT_NO_THROW(runTrace(ops, config));
  }
}

TEST(Scaling, PercentileAndSlope) {
  EXPECT_EQ(percentile({5, 1, 3, 2, 4}, 0.5), 3u);
  EXPECT_EQ(percentile({5, 1, 3, 2, 4}, 0.99), 5u);
  EXPECT_EQ(percentile({}, 0.5), 0u);
  std::vector<ScalePoint> points;
  for (std::size_t n : {16u, 64u, 256u}) {
    ScalePoint p;
    p.n = n;
    p.p99Work = n * 4;  // slope 1 in log-log
    points.push_back(p);
  }
  EXPECT_NEAR(fitSlope(points), 1.0, 1e-12);
  EXPECT_NEAR(fitSlope(points, 1), 1.0, 1e-12);
}
