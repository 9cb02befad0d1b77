#pragma once

#include <cstdint>

namespace ealab {

/// SplitMix64 finalizer. Bijective avalanche mix on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Seed for an independent stream: XOR in the index, then finalize.
/// Used for (master_seed, cell) and (cell_seed, trial) derivations so that
/// trial streams are reproducible no matter how work is scheduled.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return mix64(base ^ index);
}

/// xoshiro256++ stream, state expanded from a 64-bit seed with SplitMix64.
/// Self-contained so that sequences are identical on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : s_) {
      sm += 0x9e3779b97f4a7c15ull;
      word = mix64(sm);
    }
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in the open interval (0,1); never returns 0 or 1.
  double uniform01() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  /// Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace ealab
