#include "ealab/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ealab {
namespace {

struct Accumulator {
  double sum = 0.0, comp = 0.0;
  void add(double v) noexcept {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const noexcept { return sum + comp; }
};

}  // namespace

BoundReport lo_exact_uniform(std::uint32_t n, double p) {
  if (n < 1) throw std::invalid_argument("lo_exact_uniform: n must be >= 1");
  if (!(p > 0.0 && p < 0.5))
    throw std::domain_error("lo_exact_uniform: formula holds for 0 < p < 1/2");
  // a = -(n-1) ln(1-p); value = (e^a - (1-p)) / (2p^2) = (expm1(a) + p) / (2p^2)
  const double a = -static_cast<double>(n - 1) * std::log1p(-p);
  double value;
  if (a < 709.0) {
    value = (std::expm1(a) + p) / (2.0 * p * p);
  } else if (a < 11300.0) {
    // double would overflow; 80-bit extended still holds e^a
    const long double v =
        (std::exp(static_cast<long double>(a)) - (1.0L - p)) / (2.0L * p * p);
    value = v > static_cast<long double>(std::numeric_limits<double>::max())
                ? std::numeric_limits<double>::infinity()
                : static_cast<double>(v);
  } else {
    value = std::numeric_limits<double>::infinity();
  }
  std::string note = "exact for 0<p<1/2";
  if (std::isinf(value)) note += "; value exceeds double range, see log form";
  return {value, BoundKind::exact, note};
}

double lo_exact_uniform_log(std::uint32_t n, double p) {
  if (n < 1) throw std::invalid_argument("lo_exact_uniform_log: n must be >= 1");
  if (!(p > 0.0 && p < 0.5))
    throw std::domain_error("lo_exact_uniform_log: formula holds for 0 < p < 1/2");
  const double a = -static_cast<double>(n - 1) * std::log1p(-p);
  // ln T = a + ln(1 - (1-p) e^{-a}) - ln(2 p^2)
  return a + std::log1p(-(1.0 - p) * std::exp(-a)) - std::log(2.0 * p * p);
}

BoundReport lo_exact_vector(std::span<const double> rates) {
  if (rates.empty())
    throw std::invalid_argument("lo_exact_vector: empty rate vector");
  for (double p : rates)
    if (!(p > 0.0 && p < 1.0))
      throw std::domain_error("lo_exact_vector: every rate must lie strictly in (0,1)");
  Accumulator acc;
  long double prod = 1.0L;  // prod_{j<i} (1-p_j)
  for (double p : rates) {
    acc.add(static_cast<double>(0.5L / (static_cast<long double>(p) * prod)));
    prod *= 1.0L - static_cast<long double>(p);
  }
  return {acc.value(), BoundKind::exact, "exact for rates in (0,1)"};
}

BoundReport om_upper_uniform(std::uint32_t n, double p) {
  if (n < 1) throw std::invalid_argument("om_upper_uniform: n must be >= 1");
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("om_upper_uniform: p must be in (0,1)");
  const double value =
      (std::log(static_cast<double>(n)) + 1.0) /
      (p * std::exp(static_cast<double>(n) * std::log1p(-p)));
  return {value, BoundKind::upper_bound, "any n>=1, p in (0,1)"};
}

BoundReport om_lower_uniform(std::uint32_t n, double p) {
  if (n < 2) throw std::invalid_argument("om_lower_uniform: n must be >= 2");
  const double nd = static_cast<double>(n);
  const double lo1 = std::pow(2.0, -nd / 3.0);
  const double hi1 = 1.0 / nd;
  const double hi2 = 1.0 / (std::sqrt(nd) * std::log(nd));
  double numerator;
  std::string regime;
  if (p >= lo1 && p <= hi1) {
    numerator = std::log(nd) - std::log(std::log(nd)) - 3.0;
    regime = "2^{-n/3} <= p <= 1/n";
  } else if (p >= hi1 && p <= hi2) {
    numerator = std::log(1.0 / (p * p * nd)) - std::log(std::log(nd)) - 3.0;
    regime = "1/n <= p <= 1/(sqrt(n) ln n)";
  } else {
    throw std::domain_error("om_lower_uniform: p outside both bound regimes");
  }
  const double denom = p * std::exp(nd * std::log1p(-p));
  double value = numerator / denom;
  std::string note = regime;
  if (value < 0.0) {
    value = 0.0;
    note += "; negative numerator at small n, clamped to the vacuous bound 0";
  }
  return {value, BoundKind::lower_bound, note};
}

BoundReport mixture_expectation(const LengthDistribution& dist,
                                const std::function<BoundReport(std::uint32_t)>& per_n) {
  if (dist.kind() == LengthKind::fixed) {
    BoundReport r = per_n(dist.n_max());
    r.validity += "; degenerate length distribution";
    return r;
  }

  Accumulator acc;
  BoundKind kind = BoundKind::exact;
  bool first = true;
  const bool finite = dist.kind() == LengthKind::truncated_geometric;
  const std::uint32_t bound = finite ? dist.n_max() : support_bound(dist, 1e-12);

  // Cauchy-style divergence guard for the infinite case: dyadic block sums
  // must shrink once the pmf tail takes over.
  double prev_block = -1.0, block = 0.0;
  std::uint32_t next_block_end = 16;

  for (std::uint32_t n = 1; n <= bound; ++n) {
    const BoundReport r = per_n(n);
    if (first) {
      kind = r.kind;
      first = false;
    } else if (r.kind != kind) {
      if (kind == BoundKind::exact)
        kind = r.kind;
      else if (r.kind != BoundKind::exact)
        throw std::invalid_argument(
            "mixture_expectation: cannot mix upper and lower bounds");
    }
    const double contribution = pmf(dist, n) * r.value;
    if (!std::isfinite(contribution))
      throw std::domain_error("mixture_expectation: non-finite summand at n=" +
                              std::to_string(n));
    acc.add(contribution);
    if (!finite) {
      block += contribution;
      if (n == next_block_end) {
        if (prev_block >= 0.0 && block > prev_block && block > 1e-9 * acc.value())
          throw std::domain_error(
              "mixture_expectation: series fails the Cauchy check; per-n growth "
              "outruns the geometric decay");
        prev_block = block;
        block = 0.0;
        next_block_end *= 2;
      }
    }
  }
  return {acc.value(), kind, "mixture over the length distribution"};
}

ReformBounds reform_upper_bounds(const SequenceFamily& scaled_seq, std::uint32_t n) {
  if (n < 1) throw std::invalid_argument("reform_upper_bounds: n must be >= 1");
  if (!scaled_seq.summable())
    throw std::domain_error("reform_upper_bounds: sequence is not summable");
  const double sigma = certified_sum(scaled_seq).upper;
  if (sigma >= 1.0)
    throw std::domain_error(
        "reform_upper_bounds: certified sum " + std::to_string(sigma) +
        " >= 1 violates the hypothesis");
  const double pn = term(scaled_seq, n);
  const double denom = pn * (1.0 - sigma);
  const std::string note = "log base 2; certified Sigma upper bound " +
                           std::to_string(sigma);
  return {
      {std::log2(static_cast<double>(n)) / denom, BoundKind::upper_bound, note},
      {static_cast<double>(n) / denom, BoundKind::upper_bound, note},
  };
}

std::vector<double> exponential_growth_ratios(double p, std::uint32_t n_from,
                                              std::uint32_t n_to,
                                              std::uint32_t delta) {
  if (!(p > 0.0 && p < 0.5))
    throw std::domain_error("exponential_growth_ratios: requires 0 < p < 1/2");
  if (n_from < 1 || n_to < n_from || delta < 1)
    throw std::invalid_argument("exponential_growth_ratios: bad range");
  std::vector<double> ratios;
  ratios.reserve(n_to - n_from + 1);
  for (std::uint32_t n = n_from; n <= n_to; ++n)
    ratios.push_back(
        std::exp(lo_exact_uniform_log(n + delta, p) - lo_exact_uniform_log(n, p)));
  return ratios;
}

}  // namespace ealab
