#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ealab/analytic.hpp"
#include "ealab/ea.hpp"

using namespace ealab;

namespace {

std::uint32_t flips_between(const BitGenome& a, const BitGenome& b) {
  std::uint32_t c = 0;
  for (std::uint32_t i = 0; i < a.size(); ++i) c += a.get(i) != b.get(i);
  return c;
}

}  // namespace

TEST_CASE("mutation edge rates") {
  RngStream rng(21);
  const BitGenome x = BitGenome::random(70, rng);

  const BitGenome same = mutate(x, UniformFixed{0.0}, rng);
  CHECK(same == x);

  BitGenome flipped = mutate(x, UniformFixed{1.0}, rng);
  CHECK(flips_between(x, flipped) == 70);

  // vector with all rates one goes through the per-bit path
  const BitGenome flipped2 = mutate(x, FixedVector{std::vector<double>(70, 1.0)}, rng);
  CHECK(flips_between(x, flipped2) == 70);

  CHECK_THROWS_AS(mutate(x, FixedVector{{0.5, 0.5}}, rng), std::invalid_argument);
  CHECK_THROWS_AS(mutate(x, UniformFixed{1.5}, rng), std::invalid_argument);
}

TEST_CASE("uniform mutation flips the right number of bits on average") {
  RngStream rng(22);
  const std::uint32_t n = 10;
  const BitGenome x = BitGenome::random(n, rng);
  double total = 0.0;
  const int iters = 1000000;
  Mutator m(n, MutationScheme{UniformFixed{0.1}});
  BitGenome y = x;
  for (int i = 0; i < iters; ++i) {
    m.apply(y, rng);
    total += flips_between(x, y);
    m.revert(y);
  }
  CHECK(y == x);
  CHECK(total / iters == doctest::Approx(1.0).epsilon(0.005));
}

TEST_CASE("every mutation path matches its rate") {
  // exercise sparse, dense-comparison, half-word and complement paths
  for (const double p : {0.03, 0.2, 0.5, 0.7, 0.95}) {
    RngStream rng(static_cast<std::uint64_t>(p * 1000));
    const std::uint32_t n = 257;
    const BitGenome x = BitGenome::random(n, rng);
    Mutator m(n, MutationScheme{UniformFixed{p}});
    BitGenome y = x;
    double total = 0.0;
    const int iters = 60000;
    for (int i = 0; i < iters; ++i) {
      m.apply(y, rng);
      total += flips_between(x, y);
      m.revert(y);
    }
    REQUIRE(y == x);
    const double mean = total / iters;
    const double sigma = std::sqrt(n * p * (1 - p) / iters);
    CAPTURE(p);
    REQUIRE(std::abs(mean - n * p) <= 5 * sigma + 1e-3);
  }
}

TEST_CASE("vector mutation hits per-position rates") {
  RngStream rng(23);
  std::vector<double> rates;
  for (int i = 0; i < 40; ++i) rates.push_back(i % 2 ? 0.7 : 0.05);
  const BitGenome x = BitGenome::random(40, rng);
  Mutator m(40, MutationScheme{FixedVector{rates}});
  std::vector<std::uint32_t> flip_counts(40, 0);
  BitGenome y = x;
  const int iters = 100000;
  for (int i = 0; i < iters; ++i) {
    m.apply(y, rng);
    for (std::uint32_t b = 0; b < 40; ++b) flip_counts[b] += y.get(b) != x.get(b);
    m.revert(y);
  }
  for (std::uint32_t b = 0; b < 40; ++b) {
    const double freq = static_cast<double>(flip_counts[b]) / iters;
    const double sigma = std::sqrt(rates[b] * (1 - rates[b]) / iters);
    REQUIRE(std::abs(freq - rates[b]) <= 5 * sigma);
  }
}

TEST_CASE("random-rate mutation applies one shared rate per iteration") {
  RngStream rng(24);
  const auto q = RateDistribution::from_sequence(SequenceFamily::geometric(0.5), 8);
  const std::uint32_t n = 192;
  const BitGenome x = BitGenome::random(n, rng);
  Mutator m(n, MutationScheme{RandomRate{q}});
  BitGenome y = x;
  // E[flips] = n * E[rate]; E[rate] = sum (1/i) * P(1/i)
  double expected_rate = 0.0;
  for (std::uint64_t i = 1; i <= 8; ++i)
    expected_rate += q->atom_probability(i) / static_cast<double>(i);
  double total = 0.0;
  const int iters = 200000;
  for (int i = 0; i < iters; ++i) {
    m.apply(y, rng);
    total += flips_between(x, y);
    m.revert(y);
  }
  CHECK(y == x);
  CHECK(total / iters == doctest::Approx(n * expected_rate).epsilon(0.01));
}

TEST_CASE("run_ea is deterministic in the seed") {
  FitnessSpec spec(FitnessFamily::leading_ones, 24);
  const MutationScheme scheme{UniformFixed{1.0 / 24}};
  const RunRecord a = run_ea(spec, scheme, 100000, 987);
  const RunRecord dummy = run_ea(spec, scheme, 100000, 988);
  const RunRecord b = run_ea(spec, scheme, 100000, 987);
  CHECK(a.evaluations == b.evaluations);
  CHECK(a.seed == b.seed);
  CHECK(a.hit_budget == b.hit_budget);
  CHECK(a.evaluations != dummy.evaluations);  // almost surely
}

TEST_CASE("deterministic single-flip run") {
  // on a single bit with rate 1, a non-optimal start is repaired in one step
  FitnessSpec spec(FitnessFamily::one_max, 1);
  std::uint64_t seed = 0;
  for (;; ++seed) {
    RngStream probe(seed);
    if (!BitGenome::random(1, probe).get(0)) break;
  }
  const RunRecord r = run_ea(spec, UniformFixed{1.0}, 100, seed);
  CHECK(r.evaluations == 2);  // initial evaluation plus the flip
  CHECK(!r.hit_budget);

  // and an optimal start costs exactly the initial evaluation
  for (seed = 0;; ++seed) {
    RngStream probe(seed);
    if (BitGenome::random(1, probe).get(0)) break;
  }
  const RunRecord r2 = run_ea(spec, UniformFixed{1.0}, 100, seed);
  CHECK(r2.evaluations == 1);
}

TEST_CASE("budget semantics") {
  FitnessSpec spec(FitnessFamily::leading_ones, 40);
  const RunRecord r = run_ea(spec, UniformFixed{0.01}, 25, 5);
  CHECK(r.hit_budget);
  CHECK(r.evaluations == 25);
  CHECK_THROWS_AS(run_ea(spec, UniformFixed{0.01}, 0, 5), std::invalid_argument);
}

TEST_CASE("mean evaluations match the exact LeadingOnes formula") {
  FitnessSpec spec(FitnessFamily::leading_ones, 10);
  const double exact = lo_exact_uniform(10, 0.1).value;  // 84.0587...
  double total = 0.0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t)
    total += static_cast<double>(run_ea(spec, UniformFixed{0.1}, 1 << 20, derive_seed(31, t)).evaluations);
  const double mean = total / trials;
  // evaluations include the initial sample; the formula counts what follows
  CHECK(mean == doctest::Approx(exact).epsilon(0.02));
  CHECK(mean - 1.0 == doctest::Approx(exact).epsilon(0.005));
}

TEST_CASE("mean iterations match the vector formula") {
  FitnessSpec spec(FitnessFamily::leading_ones, 2);
  const MutationScheme scheme{FixedVector{{0.5, 0.25}}};
  double total = 0.0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t)
    total += static_cast<double>(run_ea(spec, scheme, 1 << 20, derive_seed(32, t)).evaluations);
  CHECK(total / trials - 1.0 == doctest::Approx(5.0).epsilon(0.03));
}

TEST_CASE("fixed length distribution reproduces run_ea exactly") {
  const auto dist = LengthDistribution::fixed(5);
  const ProblemBuilder builder = [](std::uint32_t n) {
    return Problem{FitnessSpec(FitnessFamily::leading_ones, n),
                   MutationScheme{UniformFixed{1.0 / n}}};
  };
  for (std::uint64_t seed = 100; seed < 150; ++seed) {
    const RunRecord via_dist = run_ea_random_length(dist, builder, 10000, seed);
    const RunRecord direct = run_ea(FitnessSpec(FitnessFamily::leading_ones, 5),
                                    UniformFixed{0.2}, 10000, seed);
    REQUIRE(via_dist.evaluations == direct.evaluations);
    REQUIRE(via_dist.realized_length == 5);
  }
}

TEST_CASE("random length grand mean matches the analytic mixture") {
  const auto dist = LengthDistribution::truncated_geometric(64, 1.0 / 8);
  const double p = 1.0 / 16;  // q/2
  const ProblemBuilder builder = [&](std::uint32_t n) {
    return Problem{FitnessSpec(FitnessFamily::leading_ones, n),
                   MutationScheme{UniformFixed{p}}};
  };
  double total = 0.0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t)
    total +=
        static_cast<double>(run_ea_random_length(dist, builder, 1 << 20, derive_seed(33, t)).evaluations);
  const double mixture =
      mixture_expectation(dist, [&](std::uint32_t n) { return lo_exact_uniform(n, p); })
          .value;
  CHECK(total / trials - 1.0 == doctest::Approx(mixture).epsilon(0.03));
}

TEST_CASE("geometric length grand mean matches a per-length Monte Carlo mixture") {
  const auto dist = LengthDistribution::geometric(0.5);
  const double p = 0.25;  // q/2
  const ProblemBuilder builder = [&](std::uint32_t n) {
    return Problem{FitnessSpec(FitnessFamily::one_max, n), MutationScheme{UniformFixed{p}}};
  };
  double grand = 0.0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t)
    grand += static_cast<double>(
        run_ea_random_length(dist, builder, 1000000, derive_seed(34, t)).evaluations);
  grand /= trials;

  // independent oracle: per-length Monte Carlo means weighted by the pmf.
  // lengths beyond 16 carry pmf < 2e-5 and contribute well under the
  // tolerance, so the cross-check mixture stops there
  double mix = 0.0;
  for (std::uint32_t n = 1; n <= 16; ++n) {
    double mean_n = 0.0;
    const int per = 10000;
    FitnessSpec spec(FitnessFamily::one_max, n);
    for (int t = 0; t < per; ++t)
      mean_n += static_cast<double>(
          run_ea(spec, UniformFixed{p}, 1000000, derive_seed(35 + n, t)).evaluations);
    mix += pmf(dist, n) * (mean_n / per);
  }
  CHECK(grand == doctest::Approx(mix).epsilon(0.03));
}

TEST_CASE("runtime distribution ignores irrelevant genome stretch") {
  const auto q = RateDistribution::from_sequence(SequenceFamily::log_power(1, 0.5), 1 << 12);
  const std::uint32_t relevant = 8;
  auto mean_ci = [&](std::uint32_t genome_len, std::uint64_t seed_base) {
    double sum = 0.0, sum2 = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
      RngStream rng(derive_seed(seed_base, t));
      // partial Fisher-Yates: distinct random positions
      std::vector<std::uint32_t> all(genome_len);
      for (std::uint32_t i = 0; i < genome_len; ++i) all[i] = i + 1;
      for (std::uint32_t i = 0; i < relevant; ++i)
        std::swap(all[i],
                  all[i + static_cast<std::uint32_t>(rng.uniform_below(genome_len - i))]);
      const std::vector<std::uint32_t> pos(all.begin(), all.begin() + relevant);
      FitnessSpec spec(FitnessFamily::one_max, genome_len);
      spec.relevant_positions(pos);
      const FitnessEval eval(spec);
      Mutator m(genome_len, MutationScheme{RandomRate{q}});
      const RunRecord r = run_ea_core(eval, m, 1 << 22, rng, genome_len, t);
      sum += static_cast<double>(r.evaluations);
      sum2 += static_cast<double>(r.evaluations) * static_cast<double>(r.evaluations);
    }
    const double mean = sum / trials;
    const double sd = std::sqrt((sum2 - trials * mean * mean) / (trials - 1));
    return std::pair{mean, 1.96 * sd / std::sqrt(static_cast<double>(trials))};
  };
  const auto [m16, h16] = mean_ci(2 * relevant, 4001);
  const auto [m32, h32] = mean_ci(4 * relevant, 4002);
  CHECK(std::abs(m16 - m32) <= h16 + h32);
}

TEST_CASE("revert restores the genome on every path") {
  RngStream rng(25);
  const auto q = RateDistribution::from_sequence(SequenceFamily::geometric(0.5), 16);
  std::vector<MutationScheme> schemes;
  schemes.emplace_back(UniformFixed{0.01});
  schemes.emplace_back(UniformFixed{0.3});
  schemes.emplace_back(UniformFixed{0.5});
  schemes.emplace_back(UniformFixed{0.93});
  schemes.emplace_back(UniformFixed{1.0});
  schemes.emplace_back(FixedVector{std::vector<double>(100, 0.2)});
  schemes.emplace_back(RandomRate{q});
  for (const auto& scheme : schemes) {
    const BitGenome x = BitGenome::random(100, rng);
    BitGenome y = x;
    Mutator m(100, scheme);
    for (int i = 0; i < 200; ++i) {
      m.apply(y, rng);
      m.revert(y);
      REQUIRE(y == x);
    }
  }
}
