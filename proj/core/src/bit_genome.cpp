#include "ealab/bit_genome.hpp"

#include <stdexcept>

namespace ealab {

BitGenome::BitGenome(std::uint32_t len) : len_(len) {
  if (len == 0) throw std::invalid_argument("BitGenome: length must be >= 1");
  w_.assign((len + 63) / 64, 0ull);
}

BitGenome BitGenome::random(std::uint32_t len, RngStream& rng) {
  BitGenome g(len);
  for (auto& w : g.w_) w = rng.next_u64();
  g.w_.back() &= g.last_word_mask();
  return g;
}

BitGenome BitGenome::all_ones(std::uint32_t len) {
  BitGenome g(len);
  for (auto& w : g.w_) w = ~0ull;
  g.w_.back() &= g.last_word_mask();
  return g;
}

BitGenome BitGenome::from_string(std::string_view bits) {
  BitGenome g(static_cast<std::uint32_t>(bits.size()));
  for (std::uint32_t i = 0; i < bits.size(); ++i) {
    const char c = bits[i];
    if (c != '0' && c != '1')
      throw std::invalid_argument("BitGenome: expected only '0'/'1'");
    if (c == '1') g.set(i, true);
  }
  return g;
}

void BitGenome::complement() noexcept {
  for (auto& w : w_) w = ~w;
  w_.back() &= last_word_mask();
}

std::string BitGenome::to_string() const {
  std::string s(len_, '0');
  for (std::uint32_t i = 0; i < len_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

}  // namespace ealab
