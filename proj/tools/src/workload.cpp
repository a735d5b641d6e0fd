#include "dynconn/tools/workload.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dynconn::tools {

Mix parseMix(const std::string& text) {
  Mix mix{0, 0, 0, 0};
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("mix entry '" + item + "' lacks ':'");
    const std::string key = item.substr(0, colon);
    double value = 0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(colon + 1), &used);
      if (used != item.size() - colon - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("mix entry '" + item + "' has a bad proportion");
    }
    if (value < 0) throw std::invalid_argument("negative proportion for " + key);
    if (key == "ins") mix.ins = value;
    else if (key == "del") mix.del = value;
    else if (key == "query") mix.query = value;
    else if (key == "node") mix.node = value;
    else throw std::invalid_argument("unknown mix key '" + key + "'");
  }
  if (std::abs(mix.ins + mix.del + mix.query + mix.node - 1.0) > 1e-9)
    throw std::invalid_argument("mix proportions must sum to 1");
  return mix;
}

namespace {

class Generator {
 public:
  Generator(std::size_t n, std::uint64_t seed, Mode mode) : n_(n), rng_(seed), mode_(mode), active_(n, 0), degree_(n, 0) {}

  std::vector<TraceOp> run(std::size_t ops, const Mix& mix) {
    for (std::size_t v = 0; v < n_; ++v) emit(OpKind::Act, static_cast<NodeId>(v));
    const double cIns = mix.ins, cDel = cIns + mix.del, cQuery = cDel + mix.query;
    for (std::size_t i = 0; i < ops; ++i) {
      const double r = unit();
      if (r < cIns) {
        if (!insert()) query();
      } else if (r < cDel) {
        if (!erase() && !insert()) query();
      } else if (r < cQuery || mix.node == 0) {
        query();
      } else if (!toggle()) {
        query();
      }
    }
    return std::move(out_);
  }

 private:
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t k) { return static_cast<std::size_t>(rng_() % k); }
  static std::uint64_t key(NodeId u, NodeId v) {
    return (std::uint64_t(std::uint32_t(std::min(u, v))) << 32) | std::uint32_t(std::max(u, v));
  }

  void emit(OpKind kind, NodeId u = -1, NodeId v = -1) {
    out_.push_back(TraceOp{kind, u, v, 0});
    const auto su = static_cast<std::size_t>(u);
    if (kind == OpKind::Act) {
      active_[su] = 1;
      activeList_.push_back(u);
    } else if (kind == OpKind::Deact) {
      active_[su] = 0;
      std::erase(activeList_, u);
    } else if (kind == OpKind::Ins) {
      where_[key(u, v)] = edges_.size();
      edges_.emplace_back(u, v);
      ++degree_[su];
      ++degree_[static_cast<std::size_t>(v)];
    } else if (kind == OpKind::Del) {
      const std::size_t at = where_.at(key(u, v));
      where_.erase(key(u, v));
      if (at + 1 != edges_.size()) {
        edges_[at] = edges_.back();
        where_[key(edges_[at].first, edges_[at].second)] = at;
      }
      edges_.pop_back();
      --degree_[su];
      --degree_[static_cast<std::size_t>(v)];
    }
  }

  bool insert() {
    if (activeList_.size() < 2) return false;
    for (int attempt = 0; attempt < 64; ++attempt) {
      const NodeId u = activeList_[below(activeList_.size())], v = activeList_[below(activeList_.size())];
      if (u == v || where_.count(key(u, v))) continue;
      emit(OpKind::Ins, u, v);
      return true;
    }
    return false;
  }

  bool erase() {
    if (edges_.empty()) return false;
    auto [u, v] = edges_[below(edges_.size())];
    emit(OpKind::Del, u, v);
    return true;
  }

  void query() {
    const double r = unit();
    auto pair = [&](OpKind kind) {
      if (activeList_.empty()) return emit(OpKind::Ncc);
      if (kind == OpKind::Tedge && !edges_.empty() && unit() < 0.5) {
        auto [u, v] = edges_[below(edges_.size())];
        return emit(kind, u, v);
      }
      emit(kind, activeList_[below(activeList_.size())], activeList_[below(activeList_.size())]);
    };
    if (mode_ == Mode::Bipartiteness) {
      if (r < 0.5) emit(OpKind::Bip);
      else if (r < 0.8) pair(OpKind::Conn);
      else emit(OpKind::Ncc);
    } else {
      if (r < 0.5) pair(OpKind::Conn);
      else if (r < 0.8) pair(OpKind::Tedge);
      else emit(OpKind::Ncc);
    }
  }

  bool toggle() {
    if (activeList_.size() < n_ && unit() < 0.5) {
      for (int attempt = 0; attempt < 32; ++attempt) {
        const auto v = static_cast<NodeId>(below(n_));
        if (!active_[static_cast<std::size_t>(v)]) return emit(OpKind::Act, v), true;
      }
    }
    for (int attempt = 0; attempt < 32 && !activeList_.empty(); ++attempt) {
      const NodeId v = activeList_[below(activeList_.size())];
      if (degree_[static_cast<std::size_t>(v)] == 0) return emit(OpKind::Deact, v), true;
    }
    return false;
  }

  std::size_t n_;
  std::mt19937_64 rng_;
  Mode mode_;
  std::vector<char> active_;
  std::vector<std::size_t> degree_;
  std::vector<NodeId> activeList_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::unordered_map<std::uint64_t, std::size_t> where_;
  std::vector<TraceOp> out_;
};

}  // namespace

std::vector<TraceOp> generateTrace(std::size_t n, std::size_t ops, const Mix& mix, std::uint64_t seed, Mode mode) {
  if (n == 0) throw std::invalid_argument("node count must be positive");
  return Generator(n, seed, mode).run(ops, mix);
}

}  // namespace dynconn::tools
