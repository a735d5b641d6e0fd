#include "dynconn/cost_model.hpp"

namespace dynconn {

std::optional<std::size_t> chooseAny(std::span<const char> flags, CostMeter& meter) {
  CrcwCell<char> any(meter);
  std::vector<std::size_t> members;
  meter.parallelFor(flags.size(), [&](std::size_t i) {
    meter.charge(1);
    if (flags[i]) {
      any.write(1);
      members.push_back(i);
    }
  });
  if (!any.value()) return std::nullopt;
  if (meter.policy().isCommon()) {
    // Lowest set index: minimise (flag clear, index).
    std::vector<char> clear(flags.size());
    meter.parallelUniform(flags.size(), 1);
    for (std::size_t i = 0; i < flags.size(); ++i) clear[i] = flags[i] ? 0 : 1;
    return reduceExtremum<char>(clear, Extremum::Min, meter).first;
  }
  return members[meter.arbitraryPick(members.size())];
}

std::vector<char> prefixAnd(std::span<const char> bits, CostMeter& meter) {
  const std::size_t n = bits.size();
  std::vector<char> out(n, 1);
  // Processor (i, j) with j <= i clears out[i] when bits[j] is 0; all
  // writers agree on the value, so this is a legal Common write.
  meter.parallelFor(n * n, [&](std::size_t p) {
    std::size_t i = p / n, j = p % n;
    meter.charge(1);
    if (j <= i && !bits[j]) out[i] = 0;
  });
  return out;
}

std::optional<std::size_t> initialSegmentEnd(std::span<const char> bits, CostMeter& meter) {
  if (bits.empty()) {
    meter.parallelUniform(0, 0);
    return std::nullopt;
  }
  std::vector<char> prefix = prefixAnd(bits, meter);
  // The set positions of prefix form [0, end]; the boundary is the unique
  // i with prefix[i] = 1 and (i is last or prefix[i+1] = 0).
  CrcwCell<std::size_t> end(meter);
  meter.parallelFor(bits.size(), [&](std::size_t i) {
    meter.charge(2);
    if (prefix[i] && (i + 1 == bits.size() || !prefix[i + 1])) end.write(i);
  });
  return end.value();
}

}  // namespace dynconn
