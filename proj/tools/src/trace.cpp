#include "dynconn/tools/trace.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace dynconn::tools {

namespace {

struct Spelling {
  OpKind kind;
  std::string_view word;
  int operands;
};

constexpr std::array<Spelling, 8> kSpellings{{{OpKind::Act, "act", 1},
                                              {OpKind::Deact, "deact", 1},
                                              {OpKind::Ins, "ins", 2},
                                              {OpKind::Del, "del", 2},
                                              {OpKind::Conn, "conn", 2},
                                              {OpKind::Ncc, "ncc", 0},
                                              {OpKind::Tedge, "tedge", 2},
                                              {OpKind::Bip, "bip", 0}}};

const Spelling& spelling(OpKind kind) {
  for (const auto& s : kSpellings)
    if (s.kind == kind) return s;
  throw std::logic_error("unknown op kind");
}

NodeId operand(const std::string& token, std::size_t line, std::size_t n) {
  long long value = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size()) throw TraceError(line, "bad node id '" + token + "'");
  if (value < 1 || (n > 0 && static_cast<std::size_t>(value) > n) || value > (1LL << 30))
    throw TraceError(line, "node id " + token + " out of range");
  return static_cast<NodeId>(value - 1);
}

}  // namespace

std::string_view name(OpKind kind) { return spelling(kind).word; }
bool isUpdate(OpKind kind) { return kind == OpKind::Ins || kind == OpKind::Del; }
bool isQuery(OpKind kind) {
  return kind == OpKind::Conn || kind == OpKind::Ncc || kind == OpKind::Tedge || kind == OpKind::Bip;
}

std::vector<TraceOp> parseTrace(std::istream& in, std::size_t n) {
  std::vector<TraceOp> ops;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream words(text);
    std::string word;
    if (!(words >> word)) continue;
    const Spelling* match = nullptr;
    for (const auto& s : kSpellings)
      if (s.word == word) match = &s;
    if (!match) throw TraceError(line, "unknown op '" + word + "'");
    TraceOp op{match->kind, -1, -1, line};
    std::string token;
    for (int i = 0; i < match->operands; ++i) {
      if (!(words >> token)) throw TraceError(line, "'" + word + "' needs " + std::to_string(match->operands) + " operands");
      (i == 0 ? op.u : op.v) = operand(token, line, n);
    }
    if (words >> token) throw TraceError(line, "trailing token '" + token + "'");
    ops.push_back(op);
  }
  return ops;
}

std::vector<TraceOp> readTrace(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace " + path);
  return parseTrace(in, n);
}

void writeTrace(std::ostream& out, const std::vector<TraceOp>& ops) {
  for (const auto& op : ops) {
    const auto& s = spelling(op.kind);
    out << s.word;
    if (s.operands >= 1) out << ' ' << op.u + 1;
    if (s.operands >= 2) out << ' ' << op.v + 1;
    out << '\n';
  }
}

std::size_t impliedNodeCount(const std::vector<TraceOp>& ops) {
  NodeId top = 0;
  for (const auto& op : ops) top = std::max({top, op.u, op.v});
  return static_cast<std::size_t>(top) + 1;
}

}  // namespace dynconn::tools
