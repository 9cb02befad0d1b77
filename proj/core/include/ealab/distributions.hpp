#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ealab/rng.hpp"
#include "ealab/sequences.hpp"

namespace ealab {

enum class LengthKind : std::uint8_t { fixed, geometric, truncated_geometric };

/// Distribution of the solution length: Fixed(n), Geo(q) or TruncGeo(N,q)
/// (geometric with all mass above N moved onto N).
class LengthDistribution {
 public:
  static LengthDistribution fixed(std::uint32_t n);
  static LengthDistribution geometric(double q);
  static LengthDistribution truncated_geometric(std::uint32_t n_max, double q);

  LengthKind kind() const noexcept { return kind_; }
  double q() const noexcept { return q_; }
  /// Fixed n, or the truncation bound N. Undefined for Geo.
  std::uint32_t n_max() const noexcept { return n_max_; }

  /// True when q falls outside the usual regime 1/N <= q <= 1/2. The
  /// machinery stays well defined there; callers surface this as a warning.
  bool outside_standard_regime() const noexcept;

 private:
  LengthKind kind_{};
  double q_ = 0.0;
  std::uint32_t n_max_ = 0;
};

/// P(length == n).
double pmf(const LengthDistribution& dist, std::uint32_t n);

/// Exact expected length: 1/q for Geo, (1-(1-q)^N)/q for TruncGeo, n for Fixed.
double expectation(const LengthDistribution& dist);

/// Draw a length; inverse-CDF on a single uniform for the geometric kinds,
/// clamped to N for TruncGeo.
std::uint32_t sample_length(const LengthDistribution& dist, RngStream& rng);

/// Largest length worth tabulating: n for Fixed, N for TruncGeo, and the
/// (1 - tail_eps) quantile for Geo.
std::uint32_t support_bound(const LengthDistribution& dist, double tail_eps = 1e-12);

/// Distribution over mutation rates {1/i : 1 <= i <= cap} with
/// P(rate = 1/i) proportional to the i-th sequence term; the mass beyond
/// cap (bounded by the certified tail) is folded into the last atom.
class RateDistribution {
 public:
  static std::shared_ptr<const RateDistribution> from_sequence(
      const SequenceFamily& seq, std::uint64_t cap);

  std::uint64_t cap() const noexcept { return cap_; }
  /// Certified total weight (prefix + tail bound).
  double total() const noexcept { return total_; }
  /// Fraction of the total weight folded into the last atom.
  double truncation_mass() const noexcept { return truncation_mass_; }

  /// P(rate == 1/i).
  double atom_probability(std::uint64_t i) const;

  /// Draw a rate 1/i by binary search of u * total over the prefix sums.
  double sample(RngStream& rng) const noexcept {
    const double target = rng.uniform01() * total_;
    return 1.0 / static_cast<double>(locate(target));
  }

  std::uint64_t sample_index(RngStream& rng) const noexcept {
    return locate(rng.uniform01() * total_);
  }

 private:
  RateDistribution() = default;
  std::uint64_t locate(double target) const noexcept;

  std::uint64_t cap_ = 0;
  double total_ = 0.0;
  double truncation_mass_ = 0.0;
  // cum_[i-1] = sum of the first i weights; cum_[cap-1] == total_ (tail folded)
  std::vector<double> cum_;
  // staged search bounds keep the common case inside one or two cache lines
  std::uint64_t hot_ = 0, warm_ = 0;
};

}  // namespace ealab
