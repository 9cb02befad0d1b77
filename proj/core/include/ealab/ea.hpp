#pragma once

#include <cstdint>
#include <functional>

#include "ealab/distributions.hpp"
#include "ealab/fitness.hpp"
#include "ealab/mutation.hpp"
#include "ealab/rng.hpp"

namespace ealab {

/// Outcome of one run. `evaluations` counts fitness evaluations until the
/// first optimum, including the evaluation of the initial sample; a run
/// stopped by the budget reports hit_budget with evaluations == budget.
struct RunRecord {
  std::uint64_t evaluations;
  bool hit_budget;
  std::uint64_t seed;
  std::uint32_t realized_length;
};

/// The (1+1) EA: sample uniformly, then repeat mutate / evaluate / keep the
/// offspring iff its fitness is at least the parent's. A RandomRate scheme
/// draws one shared flip probability per iteration. Deterministic function
/// of (spec, scheme, budget, seed).
RunRecord run_ea(const FitnessSpec& spec, const MutationScheme& scheme,
                 std::uint64_t budget, std::uint64_t seed);

struct Problem {
  FitnessSpec spec;
  MutationScheme scheme;
};
using ProblemBuilder = std::function<Problem(std::uint32_t)>;

/// Draw the solution length first, instantiate the problem for it, then run.
/// With a Fixed distribution this consumes no extra randomness, so the run
/// is identical to run_ea at that length with the same seed.
RunRecord run_ea_random_length(const LengthDistribution& dist,
                               const ProblemBuilder& builder,
                               std::uint64_t budget, std::uint64_t seed);

/// Core loop over an existing stream; building block for the harness.
RunRecord run_ea_core(const FitnessEval& eval, Mutator& mutator,
                      std::uint64_t budget, RngStream& rng,
                      std::uint32_t realized_length, std::uint64_t record_seed);

}  // namespace ealab
