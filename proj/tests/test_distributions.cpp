#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "ealab/distributions.hpp"
#include "support/stats.hpp"

using namespace ealab;

TEST_CASE("truncated geometric pmf") {
  const auto d = LengthDistribution::truncated_geometric(3, 0.5);
  CHECK(pmf(d, 1) == doctest::Approx(0.5));
  CHECK(pmf(d, 2) == doctest::Approx(0.25));
  CHECK(pmf(d, 3) == doctest::Approx(0.25));  // truncation atom
  CHECK(pmf(d, 4) == 0.0);
  CHECK(pmf(d, 1) + pmf(d, 2) + pmf(d, 3) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pmf normalization across parameterizations") {
  for (const auto& [N, q] : std::vector<std::pair<std::uint32_t, double>>{
           {1, 0.3}, {7, 0.5}, {64, 1.0 / 8}, {640, 1.0 / 64}, {1280, 0.9}}) {
    const auto d = LengthDistribution::truncated_geometric(N, q);
    double total = 0.0;
    for (std::uint32_t n = 1; n <= N; ++n) total += pmf(d, n);
    REQUIRE(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto geo = LengthDistribution::geometric(0.25);
  double total = 0.0;
  for (std::uint32_t n = 1; n <= support_bound(geo); ++n) total += pmf(geo, n);
  REQUIRE(total >= 1.0 - 1e-12);
}

TEST_CASE("expectations in closed form") {
  CHECK(expectation(LengthDistribution::geometric(0.25)) == 4.0);  // exactly 1/q
  CHECK(expectation(LengthDistribution::geometric(0.5)) == 2.0);
  CHECK(expectation(LengthDistribution::truncated_geometric(1, 0.3)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expectation(LengthDistribution::fixed(9)) == 9.0);

  // finite-sum oracle and the dominance E[TruncGeo] <= E[Geo]
  for (const auto& [N, q] : std::vector<std::pair<std::uint32_t, double>>{
           {3, 0.5}, {64, 1.0 / 8}, {640, 1.0 / 64}, {10, 0.9}}) {
    const auto d = LengthDistribution::truncated_geometric(N, q);
    double oracle = 0.0;
    for (std::uint32_t n = 1; n <= N; ++n) oracle += n * pmf(d, n);
    REQUIRE(expectation(d) == doctest::Approx(oracle).epsilon(1e-12));
    REQUIRE(expectation(d) <= 1.0 / q + 1e-12);
  }
}

TEST_CASE("length sampling follows the pmf") {
  RngStream rng(11);

  const auto fixed = LengthDistribution::fixed(7);
  for (int i = 0; i < 100; ++i) REQUIRE(sample_length(fixed, rng) == 7);

  const auto tg = LengthDistribution::truncated_geometric(3, 0.5);
  std::map<std::uint32_t, std::uint64_t> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[sample_length(tg, rng)];
  CHECK(static_cast<double>(counts[1]) / draws == doctest::Approx(0.5).epsilon(0.02));
  CHECK(static_cast<double>(counts[2]) / draws == doctest::Approx(0.25).epsilon(0.04));
  CHECK(static_cast<double>(counts[3]) / draws == doctest::Approx(0.25).epsilon(0.04));
  CHECK(counts.rbegin()->first <= 3);

  const auto geo = LengthDistribution::geometric(0.5);
  double mean = 0.0;
  std::uint32_t min_seen = 0xffffffff;
  for (int i = 0; i < draws; ++i) {
    const auto v = sample_length(geo, rng);
    mean += v;
    min_seen = std::min(min_seen, v);
  }
  CHECK(mean / draws == doctest::Approx(2.0).epsilon(0.025));
  CHECK(min_seen >= 1);
}

TEST_CASE("chi-square goodness of fit at significance 1e-4") {
  RngStream rng(12);
  const int draws = 1000000;

  // three fixed parameterizations of the length sampler
  for (const auto& dist : {LengthDistribution::truncated_geometric(3, 0.5),
                           LengthDistribution::truncated_geometric(64, 1.0 / 8),
                           LengthDistribution::geometric(0.5)}) {
    const std::uint32_t bound = support_bound(dist);
    std::vector<double> observed(bound + 1, 0.0), expected(bound + 1, 0.0);
    for (int i = 0; i < draws; ++i) {
      const auto v = std::min(sample_length(dist, rng), bound);
      observed[v] += 1.0;
    }
    for (std::uint32_t n = 1; n <= bound; ++n) expected[n] = pmf(dist, n) * draws;
    // the index-0 bins are empty on both sides; drop them
    observed.erase(observed.begin());
    expected.erase(expected.begin());
    const auto fit = teststats::chi_square_test(observed, expected, 1e-4);
    CAPTURE(fit.statistic);
    CAPTURE(fit.critical);
    REQUIRE(fit.pass);
  }
}

TEST_CASE("rate distribution over {1/i}") {
  const auto q = RateDistribution::from_sequence(SequenceFamily::geometric(0.5), 32);
  // geometric(1/2) weights sum to exactly 1 with the exact tail folded in
  CHECK(q->total() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q->atom_probability(1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(q->atom_probability(2) == doctest::Approx(0.25).epsilon(1e-12));
  // the last atom absorbs the tail
  CHECK(q->atom_probability(32) ==
        doctest::Approx(std::pow(2.0, -32.0) * 2).epsilon(1e-9));

  RngStream rng(13);
  std::uint64_t ones = 0;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) {
    const double r = q->sample(rng);
    const auto idx = static_cast<std::uint64_t>(std::llround(1.0 / r));
    REQUIRE(idx >= 1);
    REQUIRE(idx <= 32);
    REQUIRE(r == 1.0 / static_cast<double>(idx));  // exactly on the grid
    ones += r == 1.0;
  }
  CHECK(static_cast<double>(ones) / draws == doctest::Approx(0.5).epsilon(0.004));

  CHECK_THROWS_AS(RateDistribution::from_sequence(SequenceFamily::geometric(0.5), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(RateDistribution::from_sequence(SequenceFamily::harmonic(), 100),
                  std::domain_error);
}

TEST_CASE("chi-square fit of the rate sampler") {
  RngStream rng(14);
  const auto q = RateDistribution::from_sequence(SequenceFamily::geometric(0.5), 32);
  const int draws = 1000000;
  std::vector<double> observed(33, 0.0), expected(33, 0.0);
  for (int i = 0; i < draws; ++i) ++observed[q->sample_index(rng)];
  for (std::uint64_t i = 1; i <= 32; ++i) expected[i] = q->atom_probability(i) * draws;
  observed.erase(observed.begin());
  expected.erase(expected.begin());
  const auto fit = teststats::chi_square_test(observed, expected, 1e-4);
  REQUIRE(fit.pass);
}

TEST_CASE("staged search stays exact on a large support") {
  const auto q =
      RateDistribution::from_sequence(SequenceFamily::log_power(1, 1.0), 1ull << 20);
  // the default cap leaves a percent-scale tail for this slowly-decaying family
  CHECK(q->truncation_mass() > 0.015);
  CHECK(q->truncation_mass() < 0.02);

  double total = 0.0;
  for (std::uint64_t i = 1; i <= q->cap(); i += 1 + i / 3) total += q->atom_probability(i);
  CHECK(total <= 1.0);

  RngStream rng(15);
  const int draws = 400000;
  std::vector<double> observed(6, 0.0);
  for (int i = 0; i < draws; ++i) {
    const std::uint64_t idx = q->sample_index(rng);
    if (idx <= 4)
      observed[idx] += 1.0;
    else
      observed[5] += 1.0;  // everything beyond the hot head
  }
  std::vector<double> expected(6, 0.0);
  for (std::uint64_t i = 1; i <= 4; ++i) expected[i] = q->atom_probability(i) * draws;
  expected[5] = draws - expected[1] - expected[2] - expected[3] - expected[4];
  observed.erase(observed.begin());
  expected.erase(expected.begin());
  const auto fit = teststats::chi_square_test(observed, expected, 1e-4);
  REQUIRE(fit.pass);
}

TEST_CASE("regime flags") {
  CHECK(!LengthDistribution::truncated_geometric(64, 1.0 / 8).outside_standard_regime());
  CHECK(LengthDistribution::truncated_geometric(64, 0.9).outside_standard_regime());
  CHECK(LengthDistribution::truncated_geometric(4, 0.1).outside_standard_regime());
  CHECK_THROWS_AS(LengthDistribution::truncated_geometric(4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LengthDistribution::geometric(0.0), std::invalid_argument);
  CHECK_THROWS_AS(LengthDistribution::fixed(0), std::invalid_argument);
}

TEST_CASE("chi-square helper sanity") {
  // df=2 quantile at 1-1e-4 has the closed form -2 ln(1e-4)
  CHECK(teststats::chi_square_quantile(2.0, 1.0 - 1e-4) ==
        doctest::Approx(-2.0 * std::log(1e-4)).epsilon(1e-6));
  CHECK(teststats::gamma_p(0.5, 1e9) == doctest::Approx(1.0));
}
