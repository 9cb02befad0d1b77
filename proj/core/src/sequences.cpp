#include "ealab/sequences.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ealab {
namespace {

constexpr double kLn2 = 0.6931471805599453;

// Neumaier-compensated accumulator.
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

double iterated_log(int j, double r) {
  if (j < 1) throw std::invalid_argument("iterated_log: j must be >= 1");
  double v = r;
  for (int step = 0; step < j; ++step) v = v >= 2.0 ? std::log2(v) : 1.0;
  return v;
}

SequenceFamily SequenceFamily::harmonic() {
  SequenceFamily f;
  f.kind_ = SequenceKind::harmonic;
  return f;
}

SequenceFamily SequenceFamily::cathabard_shift() {
  SequenceFamily f;
  f.kind_ = SequenceKind::cathabard_shift;
  return f;
}

SequenceFamily SequenceFamily::power_law(double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("SequenceFamily::power_law: eps must be > 0");
  SequenceFamily f;
  f.kind_ = SequenceKind::power_law;
  f.eps_ = eps;
  return f;
}

SequenceFamily SequenceFamily::log_power(int s, double eps) {
  if (s < 1) throw std::invalid_argument("SequenceFamily::log_power: s must be >= 1");
  if (!(eps > 0.0))
    throw std::invalid_argument("SequenceFamily::log_power: eps must be > 0");
  SequenceFamily f;
  f.kind_ = SequenceKind::log_power;
  f.s_ = s;
  f.eps_ = eps;
  return f;
}

SequenceFamily SequenceFamily::geometric(double r) {
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("SequenceFamily::geometric: ratio must be in (0,1)");
  SequenceFamily f;
  f.kind_ = SequenceKind::geometric;
  f.ratio_ = r;
  return f;
}

SequenceFamily SequenceFamily::custom(std::vector<double> terms) {
  if (terms.empty())
    throw std::invalid_argument("SequenceFamily::custom: empty term list");
  for (double t : terms)
    if (!(t > 0.0) || !std::isfinite(t))
      throw std::invalid_argument("SequenceFamily::custom: terms must be positive finite");
  SequenceFamily f;
  f.kind_ = SequenceKind::custom;
  f.custom_terms_ = std::move(terms);
  return f;
}

SequenceFamily SequenceFamily::scaled_by(double c) const {
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("SequenceFamily::scaled_by: scale must be positive finite");
  SequenceFamily f = *this;
  f.scale_ *= c;
  return f;
}

bool SequenceFamily::summable() const noexcept {
  switch (kind_) {
    case SequenceKind::harmonic:
    case SequenceKind::cathabard_shift:
      return false;
    default:
      return true;
  }
}

std::uint64_t SequenceFamily::max_index() const noexcept {
  return kind_ == SequenceKind::custom ? custom_terms_.size()
                                       : std::numeric_limits<std::uint64_t>::max();
}

double term(const SequenceFamily& seq, std::uint64_t i) {
  if (i < 1) throw std::invalid_argument("term: index must be >= 1");
  const double x = static_cast<double>(i);
  double t;
  switch (seq.kind()) {
    case SequenceKind::harmonic:
      t = 1.0 / x;
      break;
    case SequenceKind::cathabard_shift:
      t = 1.0 / (x + 1.0);
      break;
    case SequenceKind::power_law:
      t = std::pow(x, -(1.0 + seq.eps()));
      break;
    case SequenceKind::log_power: {
      double denom = x * std::pow(iterated_log(seq.s(), x), 1.0 + seq.eps());
      for (int j = 1; j < seq.s(); ++j) denom *= iterated_log(j, x);
      t = 1.0 / denom;
      break;
    }
    case SequenceKind::geometric:
      t = std::pow(seq.ratio(), static_cast<double>(i));
      break;
    case SequenceKind::custom:
      if (i > seq.terms().size())
        throw std::out_of_range("term: index beyond custom term list");
      t = seq.terms()[i - 1];
      break;
    default:
      throw std::logic_error("term: unknown sequence kind");
  }
  t *= seq.scale();
  if (t > 1.0)
    throw std::domain_error("term: scaled term " + std::to_string(t) +
                            " exceeds 1, not a valid mutation probability");
  return t;
}

double partial_sum(const SequenceFamily& seq, std::uint64_t k) {
  if (k < 1) throw std::invalid_argument("partial_sum: k must be >= 1");
  if (seq.kind() == SequenceKind::custom && k > seq.terms().size())
    throw std::out_of_range("partial_sum: k beyond custom term list");
  Accumulator acc;
  for (std::uint64_t i = 1; i <= k; ++i) acc.add(term(seq, i));
  return acc.value();
}

double tail_bound(const SequenceFamily& seq, std::uint64_t k) {
  if (!seq.summable())
    throw std::domain_error("tail_bound: sequence is not summable");
  if (k < 4) throw std::invalid_argument("tail_bound: k must be >= 4");
  const double c = seq.scale();
  switch (seq.kind()) {
    case SequenceKind::geometric: {
      // exact: sum_{i>k} r^i = r^{k+1}/(1-r)
      const double r = seq.ratio();
      return c * std::pow(r, static_cast<double>(k + 1)) / (1.0 - r);
    }
    case SequenceKind::power_law:
      // integral bound: int_k^inf x^-(1+eps) dx = 1/(eps k^eps)
      return c / (seq.eps() * std::pow(static_cast<double>(k), seq.eps()));
    case SequenceKind::log_power: {
      // int_k^inf dx/(x (log^(s) x)^{1+eps} prod_{j<s} log^(j) x)
      //   = (ln 2)^s / (eps (log^(s) k)^eps)
      // valid where every iterated log is in its logarithmic branch.
      const int s = seq.s();
      double min_k = 4.0;  // log2(k) >= 2
      for (int j = 1; j < s; ++j) min_k = std::pow(2.0, min_k);
      if (static_cast<double>(k) < min_k)
        throw std::invalid_argument(
            "tail_bound: k too small for the s-fold integral comparison");
      const double ls = iterated_log(s, static_cast<double>(k));
      return c * std::pow(kLn2, s) / (seq.eps() * std::pow(ls, seq.eps()));
    }
    case SequenceKind::custom:
      return k >= seq.terms().size() ? 0.0
                                     : partial_sum(seq, seq.terms().size()) -
                                           partial_sum(seq, k);
    default:
      throw std::logic_error("tail_bound: unknown sequence kind");
  }
}

SumCertificate certified_sum(const SequenceFamily& seq) {
  if (!seq.summable())
    throw std::domain_error("certified_sum: sequence is not summable");
  if (seq.kind() == SequenceKind::custom) {
    const double s = partial_sum(seq, seq.terms().size());
    return {s, s, seq.terms().size()};
  }
  // Grow k until the bracket [partial + tail(k+1), partial + tail(k)] is
  // tight; its width is at most term(k).
  std::uint64_t k = 1 << 12;
  Accumulator acc;
  std::uint64_t accumulated = 0;
  for (;;) {
    for (std::uint64_t i = accumulated + 1; i <= k; ++i) acc.add(term(seq, i));
    accumulated = k;
    const double upper = acc.value() + tail_bound(seq, k);
    if (term(seq, k) <= 1e-6 * upper || k >= (1ull << 26))
      return {upper, acc.value(), k};
    k *= 2;
  }
}

double normalized_scale(const SequenceFamily& seq, double target_sum) {
  if (!(target_sum > 0.0 && target_sum < 1.0))
    throw std::invalid_argument("normalized_scale: target_sum must be in (0,1)");
  if (!seq.summable())
    throw std::domain_error("normalized_scale: sequence is not summable");
  return target_sum / certified_sum(seq).upper;
}

double iterated_log_limit_term(std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("iterated_log_limit_term: n must be >= 1");
  double denom = static_cast<double>(n);
  // almost all factors are 1, so the infinite product is finite to compute
  double v = static_cast<double>(n);
  while (v >= 2.0) {
    v = std::log2(v);
    denom *= v >= 1.0 ? v : 1.0;
  }
  return 1.0 / denom;
}

}  // namespace ealab
