#pragma once

#include <cstdint>
#include <vector>

namespace ealab {

/// j-fold base-2 logarithm, floored at 1: log^(1) r = log2(r) for r >= 2 and
/// 1 otherwise; log^(j) r applies the same rule to log^(j-1) r.
double iterated_log(int j, double r);

enum class SequenceKind : std::uint8_t {
  harmonic,        // 1/i                       (not summable)
  cathabard_shift, // 1/(i+1)                   (not summable)
  power_law,       // 1/i^(1+eps)
  log_power,       // 1/(i * (log^(s) i)^(1+eps) * prod_{j<s} log^(j) i)
  geometric,       // r^i
  custom,          // explicit finite list
};

/// A nonnegative sequence used either as per-position mutation rates or as
/// unnormalized weights of a rate distribution. `scale` multiplies every term.
class SequenceFamily {
 public:
  static SequenceFamily harmonic();
  static SequenceFamily cathabard_shift();
  static SequenceFamily power_law(double eps);
  static SequenceFamily log_power(int s, double eps);
  static SequenceFamily geometric(double r);
  static SequenceFamily custom(std::vector<double> terms);

  SequenceFamily scaled_by(double c) const;

  SequenceKind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }
  double eps() const noexcept { return eps_; }
  int s() const noexcept { return s_; }
  double ratio() const noexcept { return ratio_; }
  const std::vector<double>& terms() const noexcept { return custom_terms_; }

  bool summable() const noexcept;
  /// Largest defined index (UINT64_MAX except for custom lists).
  std::uint64_t max_index() const noexcept;

 private:
  SequenceFamily() = default;
  SequenceKind kind_{};
  double scale_ = 1.0;
  double eps_ = 0.0;   // power_law / log_power
  int s_ = 1;          // log_power
  double ratio_ = 0.5; // geometric
  std::vector<double> custom_terms_;
};

/// i-th term (i >= 1), scale applied last. Throws if the scaled term
/// exceeds 1 (not a valid mutation probability) or i is out of range.
double term(const SequenceFamily& seq, std::uint64_t i);

/// Sum of the first k terms, compensated accumulation.
double partial_sum(const SequenceFamily& seq, std::uint64_t k);

/// Certified upper bound on the tail sum_{i>k} term(i) via integral
/// comparison (exact for geometric, zero for custom). Throws for
/// non-summable families and for k below the valid comparison range.
double tail_bound(const SequenceFamily& seq, std::uint64_t k);

/// Upper estimate of the full sum: partial_sum(k*) + tail_bound(k*), with k*
/// grown until the bracket width (at most term(k*)) is below 1e-6 relative.
struct SumCertificate {
  double upper;        // certified: true sum <= upper
  double lower;        // partial sum actually accumulated
  std::uint64_t k_star;
};
SumCertificate certified_sum(const SequenceFamily& seq);

/// Scale factor c with c * Sigma <= target_sum, computed against the
/// certified upper bound, so the scaled sequence provably sums below
/// target_sum. target_sum must lie in (0,1).
double normalized_scale(const SequenceFamily& seq, double target_sum);

/// Term of the non-summable limit sequence 1/(n * prod_j log^(j) n). Only a
/// demonstration value; rejected everywhere a mutation scheme is built.
double iterated_log_limit_term(std::uint64_t n);

}  // namespace ealab
