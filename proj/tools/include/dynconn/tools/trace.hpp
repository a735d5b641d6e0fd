#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dynconn/chunk_store.hpp"

namespace dynconn::tools {

enum class OpKind { Act, Deact, Ins, Del, Conn, Ncc, Tedge, Bip };

std::string_view name(OpKind kind);
bool isUpdate(OpKind kind);
bool isQuery(OpKind kind);

/// One trace line. Operands are 0-based here and 1-based in the text form.
struct TraceOp {
  OpKind kind = OpKind::Ncc;
  NodeId u = -1;
  NodeId v = -1;
  std::size_t line = 0;
};

class TraceError : public std::runtime_error {
 public:
  TraceError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Blank lines and `#` comments are skipped. Operands must lie in [1, n]
/// when n > 0.
std::vector<TraceOp> parseTrace(std::istream& in, std::size_t n = 0);
std::vector<TraceOp> readTrace(const std::string& path, std::size_t n = 0);
void writeTrace(std::ostream& out, const std::vector<TraceOp>& ops);
/// Largest operand as a node count (1-based), at least 1.
std::size_t impliedNodeCount(const std::vector<TraceOp>& ops);

}  // namespace dynconn::tools
