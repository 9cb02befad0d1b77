#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "ealab/bit_genome.hpp"
#include "ealab/distributions.hpp"
#include "ealab/rng.hpp"

namespace ealab {

/// One shared flip probability for every position.
struct UniformFixed {
  double p;
};

/// Position-specific flip probabilities p_1..p_n.
struct FixedVector {
  std::vector<double> rates;
};

/// A fresh uniform rate drawn from Q at the start of every iteration.
struct RandomRate {
  std::shared_ptr<const RateDistribution> dist;
};

using MutationScheme = std::variant<UniformFixed, FixedVector, RandomRate>;

/// Rates plus survival prefix products, shareable across runs of different
/// lengths (a run of length n uses the first n entries).
struct VectorRateTable {
  std::vector<double> rates;
  std::vector<double> survival;  // survival[i] = prod_{j<=i} (1 - rates[j])
  bool skip_ok = false;          // next-flip skip sampling applicable

  static std::shared_ptr<const VectorRateTable> build(std::vector<double> rates);
};

/// Per-run mutation engine. Applies one mutation step in place and can
/// revert it, so rejected offspring never cost a genome copy.
///
/// Uniform rates dispatch on p: geometric gap skipping for small p, the
/// complement trick for p near 1, raw random words for p == 1/2, and a
/// bitwise binary-expansion comparison otherwise (p truncated to 40
/// fractional bits, an error below 1e-12 per bit). Vector rates use
/// inverse-CDF skip sampling over the survival products.
class Mutator {
 public:
  Mutator(std::uint32_t genome_len, const MutationScheme& scheme);
  Mutator(std::uint32_t genome_len, std::shared_ptr<const VectorRateTable> table);

  void apply(BitGenome& x, RngStream& rng) {
    switch (plan_) {
      case Plan::uniform:
        apply_uniform(uniform_p_, x, rng);
        break;
      case Plan::vector:
        apply_vector(x, rng);
        break;
      case Plan::random_rate:
        apply_uniform(rate_dist_->sample(rng), x, rng);
        break;
    }
  }

  void revert(BitGenome& x) noexcept {
    if (dense_) {
      std::uint64_t* xw = x.words();
      for (std::uint32_t w = 0; w < words_; ++w) xw[w] ^= mask_[w];
    } else {
      for (std::uint32_t i : pos_) x.flip(i);
    }
  }

 private:
  enum class Plan : std::uint8_t { uniform, vector, random_rate };

  void apply_uniform(double p, BitGenome& x, RngStream& rng) {
    pos_.clear();
    dense_ = false;
    if (p <= 0.0) return;
    if (p >= 1.0) {
      dense_ = true;
      fill_mask_ones(x);
      apply_mask(x);
      return;
    }
    if (p <= 0.125) {
      sparse_flips(p, x, rng);
      return;
    }
    dense_ = true;
    if (p >= 0.875) {
      fill_mask_ones(x);
      clear_mask_sparse(1.0 - p, rng);
    } else if (p == 0.5) {
      for (std::uint32_t w = 0; w < words_; ++w) mask_[w] = rng.next_u64();
      mask_[words_ - 1] &= tail_mask_;
    } else {
      dense_bernoulli_mask(p, rng);
    }
    apply_mask(x);
  }

  void apply_vector(BitGenome& x, RngStream& rng) {
    pos_.clear();
    dense_ = false;
    if (table_->skip_ok) {
      const double* surv = table_->survival.data();
      const double no_flip = surv[n_ - 1];
      double cur = 1.0;
      std::uint32_t from = 0;
      for (;;) {
        const double target = rng.uniform01() * cur;
        if (no_flip > target) break;  // no further flip anywhere
        const double* it =
            std::lower_bound(surv + from, surv + n_, target,
                             [](double s, double t) { return s > t; });
        if (it == surv + n_) break;
        const auto i = static_cast<std::uint32_t>(it - surv);
        x.flip(i);
        pos_.push_back(i);
        cur = surv[i];
        from = i + 1;
        if (from >= n_) break;
      }
    } else {
      const double* rates = table_->rates.data();
      for (std::uint32_t i = 0; i < n_; ++i)
        if (rng.bernoulli(rates[i])) {
          x.flip(i);
          pos_.push_back(i);
        }
    }
  }

  void sparse_flips(double p, BitGenome& x, RngStream& rng) {
    const double ln1mp = std::log1p(-p);
    std::uint32_t i = 0;
    for (;;) {
      const double gap = std::floor(std::log(rng.uniform01()) / ln1mp);
      if (gap >= static_cast<double>(n_ - i)) break;
      i += static_cast<std::uint32_t>(gap);
      x.flip(i);
      pos_.push_back(i);
      if (++i >= n_) break;
    }
  }

  void fill_mask_ones(const BitGenome& x) noexcept {
    (void)x;
    std::fill(mask_.begin(), mask_.end(), ~0ull);
    mask_[words_ - 1] &= tail_mask_;
  }

  // deselect positions with probability q; net flip probability becomes 1-q
  void clear_mask_sparse(double q, RngStream& rng) {
    if (q <= 0.0) return;
    const double ln1mq = std::log1p(-q);
    std::uint32_t i = 0;
    for (;;) {
      const double gap = std::floor(std::log(rng.uniform01()) / ln1mq);
      if (gap >= static_cast<double>(n_ - i)) break;
      i += static_cast<std::uint32_t>(gap);
      mask_[i >> 6] &= ~(1ull << (i & 63));
      if (++i >= n_) break;
    }
  }

  // each mask bit set independently with probability floor(p*2^40)/2^40,
  // by comparing uniform bit streams against p's binary expansion
  void dense_bernoulli_mask(double p, RngStream& rng) {
    const auto pbits = static_cast<std::uint64_t>(p * 0x1p40);
    for (std::uint32_t w = 0; w < words_; ++w) {
      std::uint64_t undecided = ~0ull, result = 0;
      for (int k = 39; k >= 0 && undecided; --k) {
        const std::uint64_t r = rng.next_u64();
        if ((pbits >> k) & 1) {
          result |= undecided & ~r;
          undecided &= r;
        } else {
          undecided &= ~r;
        }
      }
      mask_[w] = result;
    }
    mask_[words_ - 1] &= tail_mask_;
  }

  void apply_mask(BitGenome& x) noexcept {
    std::uint64_t* xw = x.words();
    for (std::uint32_t w = 0; w < words_; ++w) xw[w] ^= mask_[w];
  }

  std::uint32_t n_;
  std::uint32_t words_;
  std::uint64_t tail_mask_;
  Plan plan_;
  double uniform_p_ = 0.0;
  std::shared_ptr<const VectorRateTable> table_;
  std::shared_ptr<const RateDistribution> rate_dist_;

  // record of the last application
  bool dense_ = false;
  std::vector<std::uint32_t> pos_;
  std::vector<std::uint64_t> mask_;
};

/// Offspring of x: position i flipped independently with its scheme rate.
/// x itself is left untouched.
BitGenome mutate(const BitGenome& x, const MutationScheme& scheme, RngStream& rng);

}  // namespace ealab
