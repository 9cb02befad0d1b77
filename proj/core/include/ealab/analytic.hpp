#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ealab/distributions.hpp"
#include "ealab/sequences.hpp"

namespace ealab {

enum class BoundKind : std::uint8_t { exact, upper_bound, lower_bound };

/// A formula value together with what it claims (exact value vs one-sided
/// bound) and the regime it is valid in.
struct BoundReport {
  double value;
  BoundKind kind;
  std::string validity;
};

/// Expected post-initialization evaluations of the (1+1) EA with uniform
/// rate p on LeadingOnes_n:  ((1-p)^{-n+1} - (1-p)) / (2 p^2).
/// Requires 0 < p < 1/2.
BoundReport lo_exact_uniform(std::uint32_t n, double p);

/// Natural log of the same quantity, safe for any size of n.
double lo_exact_uniform_log(std::uint32_t n, double p);

/// Expected post-initialization evaluations with per-position rates p_i on
/// LeadingOnes:  sum_i 1/(2 p_i) * 1/prod_{j<i}(1-p_j). Rates in (0,1).
BoundReport lo_exact_vector(std::span<const double> rates);

/// Upper bound (ln(n)+1) / (p (1-p)^n) for OneMax_n with uniform rate p.
BoundReport om_upper_uniform(std::uint32_t n, double p);

/// Lower bound for OneMax_n with uniform rate p; two regimes:
///   (ln n - ln ln n - 3) / (p (1-p)^n)        for 2^{-n/3} <= p <= 1/n,
///   (ln(1/(p^2 n)) - ln ln n - 3) / (p (1-p)^n) for 1/n <= p <= 1/(sqrt(n) log n).
/// A negative numerator clamps to 0 (vacuous but valid) with a note.
BoundReport om_lower_uniform(std::uint32_t n, double p);

/// sum_n pmf(n) * per_n(n); kind inherited from per_n. For Geo the series is
/// cut where the pmf tail drops below 1e-12 and aborted with an error if the
/// partial sums keep growing (per_n outruns the geometric decay).
BoundReport mixture_expectation(const LengthDistribution& dist,
                                const std::function<BoundReport(std::uint32_t)>& per_n);

/// Upper bounds for a summable rate sequence with certified sum < 1:
///   OneMax:      log2(n) / (p_n (1 - Sigma))
///   LeadingOnes: n / (p_n (1 - Sigma))
struct ReformBounds {
  BoundReport one_max;
  BoundReport leading_ones;
};
ReformBounds reform_upper_bounds(const SequenceFamily& scaled_seq, std::uint32_t n);

/// Consecutive ratios T(n+delta)/T(n) of lo_exact_uniform over [n_from, n_to],
/// computed in log space so the exponential regime never overflows.
std::vector<double> exponential_growth_ratios(double p, std::uint32_t n_from,
                                              std::uint32_t n_to,
                                              std::uint32_t delta = 1);

}  // namespace ealab
