#include "ealab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ealab {

LengthDistribution LengthDistribution::fixed(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("LengthDistribution::fixed: n must be >= 1");
  LengthDistribution d;
  d.kind_ = LengthKind::fixed;
  d.n_max_ = n;
  return d;
}

LengthDistribution LengthDistribution::geometric(double q) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("LengthDistribution::geometric: q must be in (0,1)");
  LengthDistribution d;
  d.kind_ = LengthKind::geometric;
  d.q_ = q;
  return d;
}

LengthDistribution LengthDistribution::truncated_geometric(std::uint32_t n_max, double q) {
  if (n_max == 0)
    throw std::invalid_argument("LengthDistribution::truncated_geometric: N must be >= 1");
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("LengthDistribution::truncated_geometric: q must be in (0,1)");
  LengthDistribution d;
  d.kind_ = LengthKind::truncated_geometric;
  d.n_max_ = n_max;
  d.q_ = q;
  return d;
}

bool LengthDistribution::outside_standard_regime() const noexcept {
  switch (kind_) {
    case LengthKind::truncated_geometric:
      return q_ < 1.0 / static_cast<double>(n_max_) || q_ > 0.5;
    case LengthKind::geometric:
      return q_ > 0.5;
    default:
      return false;
  }
}

double pmf(const LengthDistribution& dist, std::uint32_t n) {
  if (n < 1) throw std::invalid_argument("pmf: n must be >= 1");
  const double q = dist.q();
  switch (dist.kind()) {
    case LengthKind::fixed:
      return n == dist.n_max() ? 1.0 : 0.0;
    case LengthKind::geometric:
      return q * std::pow(1.0 - q, static_cast<double>(n - 1));
    case LengthKind::truncated_geometric: {
      const std::uint32_t N = dist.n_max();
      if (n < N) return q * std::pow(1.0 - q, static_cast<double>(n - 1));
      if (n == N) return std::pow(1.0 - q, static_cast<double>(N - 1));
      return 0.0;
    }
  }
  return 0.0;
}

double expectation(const LengthDistribution& dist) {
  const double q = dist.q();
  switch (dist.kind()) {
    case LengthKind::fixed:
      return static_cast<double>(dist.n_max());
    case LengthKind::geometric:
      return 1.0 / q;
    case LengthKind::truncated_geometric:
      // TruncGeo(N,q) = min(Geo(q), N), so E = sum_{k<N} P(X>k) = (1-(1-q)^N)/q
      return -std::expm1(static_cast<double>(dist.n_max()) * std::log1p(-q)) / q;
  }
  return 0.0;
}

std::uint32_t sample_length(const LengthDistribution& dist, RngStream& rng) {
  switch (dist.kind()) {
    case LengthKind::fixed:
      return dist.n_max();  // consumes no randomness
    case LengthKind::geometric:
    case LengthKind::truncated_geometric: {
      const double u = rng.uniform01();
      const double g = std::ceil(std::log(u) / std::log1p(-dist.q()));
      std::uint32_t n = g < 1.0 ? 1u
                                : (g > 4.0e9 ? 0xffffffffu
                                             : static_cast<std::uint32_t>(g));
      if (dist.kind() == LengthKind::truncated_geometric)
        n = std::min(n, dist.n_max());
      return n;
    }
  }
  return 1;
}

std::uint32_t support_bound(const LengthDistribution& dist, double tail_eps) {
  switch (dist.kind()) {
    case LengthKind::fixed:
    case LengthKind::truncated_geometric:
      return dist.n_max();
    case LengthKind::geometric: {
      // smallest n with P(length > n) = (1-q)^n <= tail_eps
      const double n = std::log(tail_eps) / std::log1p(-dist.q());
      return static_cast<std::uint32_t>(std::ceil(n)) + 1;
    }
  }
  return 1;
}

std::shared_ptr<const RateDistribution> RateDistribution::from_sequence(
    const SequenceFamily& seq, std::uint64_t cap) {
  if (cap < 2)
    throw std::invalid_argument("RateDistribution: cap must be >= 2");
  if (!seq.summable())
    throw std::domain_error("RateDistribution: weights must come from a summable sequence");
  if (cap > seq.max_index())
    throw std::invalid_argument("RateDistribution: cap beyond custom term list");

  auto dist = std::shared_ptr<RateDistribution>(new RateDistribution());
  dist->cap_ = cap;
  dist->cum_.resize(cap);
  double sum = 0.0, comp = 0.0;
  for (std::uint64_t i = 1; i <= cap; ++i) {
    const double t = term(seq, i);
    const double y = t - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    dist->cum_[i - 1] = sum;
  }
  const double prefix = sum + comp;
  const double tail =
      seq.kind() == SequenceKind::custom && cap == seq.terms().size()
          ? 0.0
          : tail_bound(seq, cap);
  dist->total_ = prefix + tail;
  dist->truncation_mass_ = tail / dist->total_;
  dist->cum_[cap - 1] = dist->total_;  // tail mass folded into the last atom
  for (std::uint64_t i = 1; i < cap; ++i)
    if (!(dist->cum_[i] > dist->cum_[i - 1]))
      throw std::runtime_error("RateDistribution: prefix sums not strictly increasing");
  dist->hot_ = std::min<std::uint64_t>(cap, 64);
  dist->warm_ = std::min<std::uint64_t>(cap, 4096);
  return dist;
}

double RateDistribution::atom_probability(std::uint64_t i) const {
  if (i < 1 || i > cap_) return 0.0;
  const double lo = i == 1 ? 0.0 : cum_[i - 2];
  return (cum_[i - 1] - lo) / total_;
}

std::uint64_t RateDistribution::locate(double target) const noexcept {
  // staged lower_bound: nearly all of the mass sits at small indices, so
  // search a cache-resident prefix before touching the full table
  const double* begin = cum_.data();
  const double* end = cum_.data() + cum_.size();
  if (target <= cum_[hot_ - 1]) {
    end = begin + hot_;
  } else if (target <= cum_[warm_ - 1]) {
    begin += hot_;
    end = cum_.data() + warm_;
  } else {
    begin += warm_;
  }
  const double* it = std::lower_bound(begin, end, target);
  if (it == cum_.data() + cum_.size()) --it;  // u == 1 cannot occur, but be safe
  return static_cast<std::uint64_t>(it - cum_.data()) + 1;
}

}  // namespace ealab
