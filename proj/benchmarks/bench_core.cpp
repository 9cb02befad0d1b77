#include <benchmark/benchmark.h>

#include "ealab/analytic.hpp"
#include "ealab/ea.hpp"

using namespace ealab;

namespace {

void BM_MutateUniformSparse(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  RngStream rng(1);
  BitGenome x = BitGenome::random(n, rng);
  Mutator m(n, MutationScheme{UniformFixed{1.0 / n}});
  for (auto _ : state) {
    m.apply(x, rng);
    m.revert(x);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MutateUniformSparse)->Arg(64)->Arg(1024)->Arg(16384);

void BM_MutateUniformDense(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  RngStream rng(2);
  BitGenome x = BitGenome::random(n, rng);
  Mutator m(n, MutationScheme{UniformFixed{1.0 / 3}});
  for (auto _ : state) {
    m.apply(x, rng);
    m.revert(x);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MutateUniformDense)->Arg(64)->Arg(1024)->Arg(16384);

void BM_MutateVectorSkip(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto seq = SequenceFamily::log_power(1, 0.5);
  const auto scaled = seq.scaled_by(normalized_scale(seq, 0.5));
  std::vector<double> rates;
  for (std::uint32_t i = 1; i <= n; ++i) rates.push_back(term(scaled, i));
  RngStream rng(3);
  BitGenome x = BitGenome::random(n, rng);
  Mutator m(n, MutationScheme{FixedVector{rates}});
  for (auto _ : state) {
    m.apply(x, rng);
    m.revert(x);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MutateVectorSkip)->Arg(64)->Arg(512)->Arg(4096);

void BM_SampleRate(benchmark::State& state) {
  const auto q = RateDistribution::from_sequence(SequenceFamily::log_power(1, 0.5),
                                                 1ull << 20);
  RngStream rng(4);
  double acc = 0;
  for (auto _ : state) acc += q->sample(rng);
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleRate);

void BM_LeadingOnesEval(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  RngStream rng(5);
  const FitnessEval eval(FitnessSpec(FitnessFamily::leading_ones, n));
  const BitGenome x = BitGenome::random(n, rng);
  std::uint64_t acc = 0;
  for (auto _ : state) acc += eval(x);
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LeadingOnesEval)->Arg(64)->Arg(1024)->Arg(16384);

void BM_RunEaLeadingOnes(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const FitnessSpec spec(FitnessFamily::leading_ones, n);
  std::uint64_t seed = 0, evals = 0;
  for (auto _ : state)
    evals += run_ea(spec, UniformFixed{1.0 / n}, 1 << 24, ++seed).evaluations;
  state.SetItemsProcessed(static_cast<std::int64_t>(evals));
}
BENCHMARK(BM_RunEaLeadingOnes)->Arg(32)->Arg(128);

void BM_LoExactVector(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  std::vector<double> rates;
  for (std::uint32_t i = 1; i <= n; ++i) rates.push_back(1.0 / (i + 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(lo_exact_vector(rates).value);
}
BENCHMARK(BM_LoExactVector)->Arg(512)->Arg(8192);

}  // namespace

BENCHMARK_MAIN();
