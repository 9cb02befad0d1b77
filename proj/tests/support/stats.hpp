#pragma once

// Test-only statistics helpers: regularized incomplete gamma, chi-square
// quantiles, and a goodness-of-fit runner. Independent of the library code
// they are used to check.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace teststats {

// regularized lower incomplete gamma P(a, x)
inline double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, del = 1.0 / a, sum = del;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  // continued fraction, modified Lentz
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

inline double chi_square_quantile(double df, double prob) {
  double lo = 0.0, hi = df + 200.0 * std::sqrt(2.0 * df) + 200.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gamma_p(df / 2.0, mid / 2.0) < prob)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct GoodnessOfFit {
  double statistic;
  double df;
  double critical;  // at the requested significance
  bool pass;
};

// observed counts vs expected counts (same total); bins with expected < 10
// are pooled into the final bin before the statistic is formed
inline GoodnessOfFit chi_square_test(std::vector<double> observed,
                                     std::vector<double> expected,
                                     double significance) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw std::invalid_argument("chi_square_test: bad bins");
  std::vector<double> obs, exp;
  double pool_obs = 0.0, pool_exp = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] < 10.0) {
      pool_obs += observed[i];
      pool_exp += expected[i];
    } else {
      obs.push_back(observed[i]);
      exp.push_back(expected[i]);
    }
  }
  if (pool_exp > 0.0) {
    obs.push_back(pool_obs);
    exp.push_back(pool_exp);
  }
  if (obs.size() < 2) throw std::invalid_argument("chi_square_test: too few usable bins");
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double d = obs[i] - exp[i];
    stat += d * d / exp[i];
  }
  const double df = static_cast<double>(obs.size() - 1);
  const double critical = chi_square_quantile(df, 1.0 - significance);
  return {stat, df, critical, stat < critical};
}

}  // namespace teststats
