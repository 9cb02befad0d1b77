#include "ealab/fitness.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace ealab {

FitnessSpec::FitnessSpec(FitnessFamily family, std::uint32_t genome_len)
    : family_(family), genome_len_(genome_len) {
  if (genome_len == 0)
    throw std::invalid_argument("FitnessSpec: genome_len must be >= 1");
}

FitnessSpec& FitnessSpec::xor_mask(BitGenome z) {
  if (z.size() != genome_len_)
    throw std::invalid_argument("FitnessSpec: mask length != genome_len");
  mask_ = std::move(z);
  return *this;
}

FitnessSpec& FitnessSpec::relevant_positions(std::vector<std::uint32_t> one_based) {
  if (one_based.empty())
    throw std::invalid_argument("FitnessSpec: relevant position list is empty");
  std::unordered_set<std::uint32_t> seen;
  for (auto& p : one_based) {
    if (p < 1 || p > genome_len_)
      throw std::invalid_argument("FitnessSpec: relevant position out of range");
    if (!seen.insert(p).second)
      throw std::invalid_argument("FitnessSpec: relevant positions must be distinct");
    p -= 1;  // store 0-based
  }
  positions_ = std::move(one_based);
  return *this;
}

FitnessEval::FitnessEval(const FitnessSpec& spec)
    : genome_len_(spec.genome_len()), max_fitness_(spec.n()) {
  const std::uint32_t words = (genome_len_ + 63) / 64;
  const std::uint32_t rem = genome_len_ & 63;
  tail_mask_ = rem == 0 ? ~0ull : (1ull << rem) - 1;

  if (spec.mask()) {
    const BitGenome& z = *spec.mask();
    target_.assign(z.words(), z.words() + words);
  } else {
    target_.assign(words, ~0ull);
    target_.back() &= tail_mask_;
  }

  const bool scattered = spec.positions().has_value();
  if (!scattered) {
    mode_ = spec.family() == FitnessFamily::one_max ? Mode::om_dense : Mode::lo_dense;
    return;
  }

  if (spec.family() == FitnessFamily::one_max) {
    mode_ = Mode::om_scattered;
    std::vector<std::uint32_t> sorted = *spec.positions();
    std::sort(sorted.begin(), sorted.end());
    for (std::uint32_t pos : sorted) {
      const std::uint32_t w = pos >> 6;
      if (!word_masks_.empty() && word_masks_.back().first == w)
        word_masks_.back().second |= 1ull << (pos & 63);
      else
        word_masks_.emplace_back(w, 1ull << (pos & 63));
    }
  } else {
    mode_ = Mode::lo_scattered;
    ordered_positions_ = *spec.positions();
  }
}

std::uint32_t evaluate(const FitnessSpec& spec, const BitGenome& x) {
  if (x.size() != spec.genome_len())
    throw std::invalid_argument("evaluate: genome length != spec.genome_len");
  return FitnessEval(spec)(x);
}

bool is_optimal(const FitnessSpec& spec, const BitGenome& x) {
  return evaluate(spec, x) == spec.n();
}

}  // namespace ealab
