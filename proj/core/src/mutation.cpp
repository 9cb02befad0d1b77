#include "ealab/mutation.hpp"

#include <stdexcept>
#include <string>

namespace ealab {

std::shared_ptr<const VectorRateTable> VectorRateTable::build(std::vector<double> rates) {
  if (rates.empty())
    throw std::invalid_argument("VectorRateTable: rate vector is empty");
  auto table = std::make_shared<VectorRateTable>();
  table->survival.resize(rates.size());
  bool skip_ok = true;
  double prod = 1.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const double p = rates[i];
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("VectorRateTable: rate[" + std::to_string(i) +
                                  "] = " + std::to_string(p) + " outside [0,1]");
    if (p >= 1.0) skip_ok = false;
    prod *= 1.0 - p;
    table->survival[i] = prod;
  }
  if (prod < 1e-300) skip_ok = false;  // survival underflow; fall back to per-bit
  table->skip_ok = skip_ok;
  table->rates = std::move(rates);
  return table;
}

Mutator::Mutator(std::uint32_t genome_len, const MutationScheme& scheme)
    : n_(genome_len),
      words_((genome_len + 63) / 64),
      tail_mask_((genome_len & 63) == 0 ? ~0ull : (1ull << (genome_len & 63)) - 1),
      plan_(Plan::uniform) {
  if (genome_len == 0) throw std::invalid_argument("Mutator: genome_len must be >= 1");
  if (const auto* u = std::get_if<UniformFixed>(&scheme)) {
    if (!(u->p >= 0.0 && u->p <= 1.0))
      throw std::invalid_argument("Mutator: uniform rate outside [0,1]");
    plan_ = Plan::uniform;
    uniform_p_ = u->p;
  } else if (const auto* v = std::get_if<FixedVector>(&scheme)) {
    if (v->rates.size() != genome_len)
      throw std::invalid_argument("Mutator: rate vector length != genome length");
    plan_ = Plan::vector;
    table_ = VectorRateTable::build(v->rates);
  } else {
    const auto& r = std::get<RandomRate>(scheme);
    if (!r.dist) throw std::invalid_argument("Mutator: null rate distribution");
    plan_ = Plan::random_rate;
    rate_dist_ = r.dist;
  }
  mask_.assign(words_, 0ull);
  pos_.reserve(64);
}

Mutator::Mutator(std::uint32_t genome_len, std::shared_ptr<const VectorRateTable> table)
    : n_(genome_len),
      words_((genome_len + 63) / 64),
      tail_mask_((genome_len & 63) == 0 ? ~0ull : (1ull << (genome_len & 63)) - 1),
      plan_(Plan::vector),
      table_(std::move(table)) {
  if (genome_len == 0) throw std::invalid_argument("Mutator: genome_len must be >= 1");
  if (!table_ || table_->rates.size() < genome_len)
    throw std::invalid_argument("Mutator: shared rate table shorter than genome");
  mask_.assign(words_, 0ull);
  pos_.reserve(64);
}

BitGenome mutate(const BitGenome& x, const MutationScheme& scheme, RngStream& rng) {
  BitGenome y = x;
  Mutator m(x.size(), scheme);
  m.apply(y, rng);
  return y;
}

}  // namespace ealab
