#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "ealab/bit_genome.hpp"

namespace ealab {

enum class FitnessFamily : std::uint8_t { one_max, leading_ones };

/// Which function is being optimized: OneMax or LeadingOnes over a genome of
/// genome_len bits, optionally measured against a hidden target string
/// (fitness counts agreements with it, so the target is the unique optimum),
/// optionally restricted to a list of relevant positions inside a longer
/// genome. Effective solution length n is the relevant-position count when
/// present, genome_len otherwise.
class FitnessSpec {
 public:
  FitnessSpec(FitnessFamily family, std::uint32_t genome_len);

  /// Hidden target string z; fitness counts positions agreeing with z.
  FitnessSpec& xor_mask(BitGenome z);
  /// 1-based, pairwise distinct positions b_1..b_n inside the genome.
  /// LeadingOnes reads them in the given order (b_1 first).
  FitnessSpec& relevant_positions(std::vector<std::uint32_t> one_based);

  FitnessFamily family() const noexcept { return family_; }
  std::uint32_t genome_len() const noexcept { return genome_len_; }
  /// Effective solution length n == maximal fitness.
  std::uint32_t n() const noexcept {
    return positions_ ? static_cast<std::uint32_t>(positions_->size())
                      : genome_len_;
  }
  const std::optional<BitGenome>& mask() const noexcept { return mask_; }
  const std::optional<std::vector<std::uint32_t>>& positions() const noexcept {
    return positions_;
  }

 private:
  FitnessFamily family_;
  std::uint32_t genome_len_;
  std::optional<BitGenome> mask_;
  std::optional<std::vector<std::uint32_t>> positions_;  // stored 0-based
};

/// Compiled form of a FitnessSpec, cheap to evaluate repeatedly.
class FitnessEval {
 public:
  explicit FitnessEval(const FitnessSpec& spec);

  std::uint32_t operator()(const BitGenome& x) const noexcept {
    const std::uint64_t* xw = x.words();
    switch (mode_) {
      case Mode::om_dense: {
        std::uint32_t c = 0;
        const std::size_t last = target_.size() - 1;
        for (std::size_t w = 0; w < last; ++w)
          c += static_cast<std::uint32_t>(std::popcount(~(xw[w] ^ target_[w])));
        c += static_cast<std::uint32_t>(
            std::popcount(~(xw[last] ^ target_[last]) & tail_mask_));
        return c;
      }
      case Mode::lo_dense: {
        std::uint32_t c = 0;
        const std::size_t last = target_.size() - 1;
        for (std::size_t w = 0; w <= last; ++w) {
          std::uint64_t agree = ~(xw[w] ^ target_[w]);
          if (w == last) agree &= tail_mask_;
          const int ones = std::countr_one(agree);
          c += static_cast<std::uint32_t>(ones);
          if (ones < 64) break;
        }
        return c;
      }
      case Mode::om_scattered: {
        std::uint32_t c = 0;
        for (const auto& [w, m] : word_masks_)
          c += static_cast<std::uint32_t>(std::popcount(~(xw[w] ^ target_[w]) & m));
        return c;
      }
      case Mode::lo_scattered: {
        std::uint32_t c = 0;
        for (std::uint32_t pos : ordered_positions_) {
          const bool agree = (((xw[pos >> 6] ^ target_[pos >> 6]) >> (pos & 63)) & 1u) == 0;
          if (!agree) break;
          ++c;
        }
        return c;
      }
    }
    return 0;  // unreachable
  }

  std::uint32_t max_fitness() const noexcept { return max_fitness_; }
  std::uint32_t genome_len() const noexcept { return genome_len_; }

 private:
  enum class Mode : std::uint8_t { om_dense, lo_dense, om_scattered, lo_scattered };

  Mode mode_;
  std::uint32_t genome_len_;
  std::uint32_t max_fitness_;
  std::uint64_t tail_mask_;
  std::vector<std::uint64_t> target_;  // hidden target (all ones when no mask)
  std::vector<std::pair<std::uint32_t, std::uint64_t>> word_masks_;
  std::vector<std::uint32_t> ordered_positions_;  // 0-based
};

/// Fitness of x under spec. Throws on genome length mismatch.
std::uint32_t evaluate(const FitnessSpec& spec, const BitGenome& x);

/// True iff x attains the maximal fitness n.
bool is_optimal(const FitnessSpec& spec, const BitGenome& x);

}  // namespace ealab
