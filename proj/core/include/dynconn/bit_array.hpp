#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace dynconn {

/// Fixed-width bit array. Storage is allocated on the first set bit, so the
/// many all-zero vectors of sparse structures cost no memory.
class BitArray {
 public:
  BitArray() = default;
  explicit BitArray(std::size_t width) : width_(width) {}

  std::size_t width() const { return width_; }

  bool test(std::size_t i) const {
    if (words_.empty()) return false;
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i, bool value = true) {
    if (!value) {
      reset(i);
      return;
    }
    materialize();
    words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  void reset(std::size_t i) {
    if (words_.empty()) return;
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  void clear() { words_.clear(); }

  bool any() const {
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  BitArray& operator|=(const BitArray& other) {
    if (other.words_.empty()) return *this;
    materialize();
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }

  friend bool operator==(const BitArray& a, const BitArray& b) {
    if (a.width_ != b.width_) return false;
    const std::size_t n = (a.width_ + 63) / 64;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t wa = a.words_.empty() ? 0 : a.words_[i];
      std::uint64_t wb = b.words_.empty() ? 0 : b.words_[i];
      if (wa != wb) return false;
    }
    return true;
  }

  /// Set positions in increasing order.
  std::vector<std::size_t> ones() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
    return out;
  }

 private:
  void materialize() {
    if (words_.empty()) words_.assign((width_ + 63) / 64, 0);
  }

  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace dynconn
