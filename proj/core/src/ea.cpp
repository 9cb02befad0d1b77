#include "ealab/ea.hpp"

#include <cassert>
#include <stdexcept>

namespace ealab {

RunRecord run_ea_core(const FitnessEval& eval, Mutator& mutator,
                      std::uint64_t budget, RngStream& rng,
                      std::uint32_t realized_length, std::uint64_t record_seed) {
  BitGenome x = BitGenome::random(eval.genome_len(), rng);
  std::uint32_t best = eval(x);
  std::uint64_t evals = 1;
  const std::uint32_t optimum = eval.max_fitness();

  while (best < optimum && evals < budget) {
    mutator.apply(x, rng);
    const std::uint32_t f = eval(x);
    ++evals;
    if (f >= best) {
      best = f;  // accept; best-so-far fitness never decreases
    } else {
      mutator.revert(x);
      assert(eval(x) == best);
    }
  }
  return {evals, best < optimum, record_seed, realized_length};
}

RunRecord run_ea(const FitnessSpec& spec, const MutationScheme& scheme,
                 std::uint64_t budget, std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("run_ea: budget must be >= 1");
  RngStream rng(seed);
  const FitnessEval eval(spec);
  Mutator mutator(spec.genome_len(), scheme);
  return run_ea_core(eval, mutator, budget, rng, spec.genome_len(), seed);
}

RunRecord run_ea_random_length(const LengthDistribution& dist,
                               const ProblemBuilder& builder,
                               std::uint64_t budget, std::uint64_t seed) {
  if (budget < 1)
    throw std::invalid_argument("run_ea_random_length: budget must be >= 1");
  RngStream rng(seed);
  const std::uint32_t n = sample_length(dist, rng);
  const Problem problem = builder(n);
  const FitnessEval eval(problem.spec);
  Mutator mutator(problem.spec.genome_len(), problem.scheme);
  return run_ea_core(eval, mutator, budget, rng, n, seed);
}

}  // namespace ealab
