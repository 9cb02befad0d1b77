#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ealab/rng.hpp"

namespace ealab {

/// Fixed-length bit string stored as packed 64-bit words.
/// Invariant: bits at positions >= size() are always zero.
class BitGenome {
 public:
  explicit BitGenome(std::uint32_t len);

  static BitGenome random(std::uint32_t len, RngStream& rng);
  static BitGenome all_ones(std::uint32_t len);
  /// Parse "1011"; character k is position k (0-based).
  static BitGenome from_string(std::string_view bits);

  std::uint32_t size() const noexcept { return len_; }
  std::uint32_t word_count() const noexcept {
    return static_cast<std::uint32_t>(w_.size());
  }

  bool get(std::uint32_t i) const noexcept {
    return (w_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::uint32_t i, bool v) noexcept {
    const std::uint64_t m = 1ull << (i & 63);
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }
  void flip(std::uint32_t i) noexcept { w_[i >> 6] ^= 1ull << (i & 63); }

  /// Flip every bit (tail bits stay zero).
  void complement() noexcept;

  std::uint32_t count_ones() const noexcept {
    std::uint32_t c = 0;
    for (std::uint64_t w : w_) c += static_cast<std::uint32_t>(std::popcount(w));
    return c;
  }

  const std::uint64_t* words() const noexcept { return w_.data(); }
  std::uint64_t* words() noexcept { return w_.data(); }

  /// Mask selecting the in-range bits of the last word.
  std::uint64_t last_word_mask() const noexcept {
    const std::uint32_t rem = len_ & 63;
    return rem == 0 ? ~0ull : (1ull << rem) - 1;
  }

  bool operator==(const BitGenome&) const = default;

  std::string to_string() const;

 private:
  std::uint32_t len_;
  std::vector<std::uint64_t> w_;
};

}  // namespace ealab
