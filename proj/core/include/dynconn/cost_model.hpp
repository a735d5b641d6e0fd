#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace dynconn {

/// Raised when a caller breaks an operation's precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when an internal consistency check or a CRCW write rule fails.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Concurrent-write rule of the simulated CRCW machine.
struct WritePolicy {
  enum class Kind { Common, Arbitrary };

  Kind kind = Kind::Arbitrary;
  // Exponent of the blocked extremum reduction. Common(eps) uses it for all
  // tie-breaking; Arbitrary only for reduceExtremum itself.
  double epsilon = 0.5;
  std::uint64_t seed = 0;

  static WritePolicy common(double eps) {
    if (!(eps > 0.0) || eps > 1.0) throw PreconditionError("Common epsilon must lie in (0,1]");
    return WritePolicy{Kind::Common, eps, 0};
  }
  static WritePolicy arbitrary(std::uint64_t seed) { return WritePolicy{Kind::Arbitrary, 0.5, seed}; }

  bool isCommon() const { return kind == Kind::Common; }
  /// Number of blocked rounds used by reduceExtremum.
  int rounds() const { return static_cast<int>(std::ceil(1.0 / epsilon - 1e-12)); }
};

/// Work/depth accumulator for the simulated PRAM.
///
/// A construct's depth is the number of synchronous rounds on its critical
/// path. parallelFor adds 1 + max(body depth) to the enclosing scope and
/// charges one unit of work per scheduled iteration; charge() adds work only.
class CostMeter {
 public:
  explicit CostMeter(WritePolicy policy = WritePolicy::arbitrary(0))
      : policy_(policy), rng_(policy.seed) {
    frames_.push_back(0);
  }

  const WritePolicy& policy() const { return policy_; }
  void setPolicy(WritePolicy policy) {
    policy_ = policy;
    rng_.seed(policy.seed);
  }

  std::uint64_t work() const { return work_; }
  /// Depth accumulated in the outermost scope.
  std::uint64_t depth() const { return frames_.front(); }
  std::uint64_t spaceHighWater() const { return space_; }

  /// Clears work and depth; the arbitrary-choice stream keeps advancing.
  void reset() {
    work_ = 0;
    frames_.assign(1, 0);
  }

  void charge(std::uint64_t units) { work_ += units; }
  void noteSpace(std::uint64_t cells) { space_ = std::max(space_, cells); }

  template <class Body>
  void parallelFor(std::size_t count, Body&& body) {
    std::uint64_t deepest = 0;
    for (std::size_t i = 0; i < count; ++i) {
      frames_.push_back(0);
      body(i);
      deepest = std::max(deepest, frames_.back());
      frames_.pop_back();
    }
    work_ += count;
    frames_.back() += 1 + deepest;
  }

  /// parallelFor whose iterations all cost bodyWork work and bodyDepth depth.
  void parallelUniform(std::size_t count, std::uint64_t bodyWork, std::uint64_t bodyDepth = 0) {
    work_ += count + count * bodyWork;
    frames_.back() += 1 + (count == 0 ? 0 : bodyDepth);
  }

  /// Runs independent tasks side by side: depth is the maximum, work the sum.
  template <class... Tasks>
  void parallelInvoke(Tasks&&... tasks) {
    std::uint64_t deepest = 0;
    auto run = [&](auto&& task) {
      frames_.push_back(0);
      task();
      deepest = std::max(deepest, frames_.back());
      frames_.pop_back();
    };
    (run(tasks), ...);
    work_ += sizeof...(Tasks);
    frames_.back() += 1 + deepest;
  }

  /// Runs body on a fixed schedule of `rounds` synchronous rounds; a branch
  /// that finishes early idles until the schedule ends. Throws
  /// ContractViolation if the body needs more rounds than scheduled.
  template <class Body>
  auto scheduled(std::uint64_t rounds, Body&& body) {
    frames_.push_back(0);
    bool closed = false;
    auto close = [&] {
      closed = true;
      const std::uint64_t used = frames_.back();
      frames_.pop_back();
      frames_.back() += rounds;
      deepestScheduled_ = std::max(deepestScheduled_, used);
      if (used > rounds) throw ContractViolation("operation exceeded its round schedule");
    };
    try {
      if constexpr (std::is_void_v<decltype(body())>) {
        body();
        close();
      } else {
        auto result = body();
        close();
        return result;
      }
    } catch (...) {
      if (!closed) frames_.pop_back();
      throw;
    }
  }
  /// Deepest body seen by scheduled() since construction.
  std::uint64_t deepestScheduled() const { return deepestScheduled_; }

  /// Seeded choice among `count` equally valid writers (Arbitrary model).
  std::size_t arbitraryPick(std::size_t count) {
    if (count == 0) throw PreconditionError("arbitrary pick from empty set");
    return static_cast<std::size_t>(rng_() % count);
  }

 private:
  WritePolicy policy_;
  std::uint64_t work_ = 0;
  std::uint64_t space_ = 0;
  std::uint64_t deepestScheduled_ = 0;
  std::vector<std::uint64_t> frames_;
  std::mt19937_64 rng_;
};

/// One shared memory cell written by many processors in the same round.
/// Under Common every writer must agree; under Arbitrary the first write
/// recorded in the round wins.
template <class T>
class CrcwCell {
 public:
  explicit CrcwCell(const CostMeter& meter) : common_(meter.policy().isCommon()) {}

  void write(const T& value) {
    if (!value_) {
      value_ = value;
    } else if (common_ && !(*value_ == value)) {
      throw ContractViolation("conflicting concurrent write under the Common policy");
    }
  }
  const std::optional<T>& value() const { return value_; }

 private:
  bool common_;
  std::optional<T> value_;
};

enum class Extremum { Min, Max };

/// Extremal key and a witnessing position.
///
/// Blocked all-pairs tournament: every round splits the surviving candidates
/// into blocks of ceil(n^(1/R)) and keeps one winner per block, so R =
/// ceil(1/eps) rounds always suffice. Under Common ties go to the lowest
/// index; under Arbitrary the witness is drawn from the tied set.
template <class Key, class Less = std::less<Key>>
std::pair<std::size_t, Key> reduceExtremum(std::span<const Key> values, Extremum mode, CostMeter& meter,
                                           Less less = Less{}) {
  if (values.empty()) throw PreconditionError("empty reduction");
  const std::size_t n = values.size();
  auto better = [&](std::size_t a, std::size_t b) {
    const Key& ka = values[a];
    const Key& kb = values[b];
    bool strict = mode == Extremum::Min ? less(ka, kb) : less(kb, ka);
    bool strictOther = mode == Extremum::Min ? less(kb, ka) : less(ka, kb);
    if (strict) return true;
    if (strictOther) return false;
    return a < b;
  };

  const int rounds = meter.policy().rounds();
  std::size_t block = 2;
  while (true) {
    double reach = std::pow(static_cast<double>(block), rounds);
    if (reach >= static_cast<double>(n)) break;
    ++block;
  }

  std::vector<std::size_t> alive(n);
  for (std::size_t i = 0; i < n; ++i) alive[i] = i;
  meter.parallelUniform(n, 1);

  for (int r = 0; r < rounds; ++r) {
    const std::size_t blocks = (alive.size() + block - 1) / block;
    std::vector<std::size_t> next(blocks);
    meter.parallelFor(blocks, [&](std::size_t b) {
      const std::size_t lo = b * block;
      const std::size_t hi = std::min(alive.size(), lo + block);
      const std::size_t width = hi - lo;
      // One processor per ordered pair marks the loser; then the unique
      // unmarked slot writes the block winner.
      std::vector<char> beaten(width, 0);
      meter.parallelFor(width * width, [&](std::size_t p) {
        std::size_t i = p / width, j = p % width;
        meter.charge(2);
        if (i != j && better(alive[lo + i], alive[lo + j])) beaten[j] = 1;
      });
      CrcwCell<std::size_t> winner(meter);
      meter.parallelFor(width, [&](std::size_t i) {
        meter.charge(1);
        if (!beaten[i]) winner.write(alive[lo + i]);
      });
      if (!winner.value()) throw ContractViolation("extremum block without a winner");
      next[b] = winner.value().value();
    });
    alive.swap(next);
  }

  std::size_t witness = alive.front();
  if (!meter.policy().isCommon()) {
    // Any member of the tied set is a valid answer; pick one in a linear pass.
    std::vector<std::size_t> tied;
    const Key& best = values[witness];
    meter.parallelFor(n, [&](std::size_t i) {
      meter.charge(1);
      if (!less(values[i], best) && !less(best, values[i])) tied.push_back(i);
    });
    witness = tied[meter.arbitraryPick(tied.size())];
  }
  return {witness, values[witness]};
}

/// Index of some set position, or nullopt. Common returns the lowest such
/// index (through reduceExtremum), Arbitrary a seeded member of the set.
std::optional<std::size_t> chooseAny(std::span<const char> flags, CostMeter& meter);

/// out[i] = AND of bits[0..i], evaluated with one processor per pair (j <= i).
std::vector<char> prefixAnd(std::span<const char> bits, CostMeter& meter);

/// Largest i with bits[0..i] all set, or nullopt when bits[0] is clear.
std::optional<std::size_t> initialSegmentEnd(std::span<const char> bits, CostMeter& meter);

}  // namespace dynconn
