#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ealab/distributions.hpp"
#include "ealab/ea.hpp"
#include "ealab/fitness.hpp"
#include "ealab/mutation.hpp"
#include "ealab/sequences.hpp"

namespace ealab {

enum class PlacementKind : std::uint8_t { none, random, contiguous, explicit_list };

/// Where the relevant bits live inside the genome. `random` redraws the
/// positions for every trial from that trial's own stream.
struct PlacementPolicy {
  PlacementKind kind = PlacementKind::none;
  std::uint32_t relevant = 0;
  std::vector<std::uint32_t> positions;  // 1-based, explicit_list only
};

struct FunctionTemplate {
  FitnessFamily family = FitnessFamily::one_max;
  bool random_mask = false;  // fresh hidden target per trial
  PlacementPolicy placement;
};

/// Uniform rate, possibly bound late to the cell's length distribution:
/// q, q/2, or 1/N.
enum class RateRuleKind : std::uint8_t { literal, q_value, q_over_2, one_over_n };
struct RateRule {
  RateRuleKind kind = RateRuleKind::literal;
  double value = 0.0;
};

enum class SchemeKind : std::uint8_t {
  uniform,
  vector_sequence,
  vector_literal,
  random_rate
};

struct SchemeTemplate {
  SchemeKind kind = SchemeKind::uniform;
  RateRule rate;                                // uniform
  std::optional<SequenceFamily> sequence;       // vector_sequence / random_rate
  std::optional<double> normalize_target;       // vector_sequence
  std::vector<double> literal_rates;            // vector_literal
  std::uint64_t cap = 1ull << 20;               // random_rate
};

/// One experiment cell: a genome length (or a length distribution) plus a
/// trial count.
struct CellSpec {
  std::string key;
  std::variant<std::uint32_t, LengthDistribution> length;
  std::uint64_t trials = 0;
};

struct ExperimentConfig {
  std::string id;
  FunctionTemplate function;
  SchemeTemplate scheme;
  std::vector<CellSpec> cells;
  std::uint64_t budget = 1'000'000;
  std::uint64_t master_seed = 1;
  std::uint32_t threads = 0;  // 0 = EA_LAB_THREADS env, else hardware
};

struct RawRecord {
  std::uint32_t cell_index;
  std::uint64_t trial_index;
  std::uint64_t seed;
  std::uint32_t realized_length;
  std::uint64_t evaluations;
  bool hit_budget;
};

/// Per-cell statistics over the uncensored runs. Censored runs are counted
/// separately and never averaged in; a cell with more than half of its runs
/// censored is flagged unusable.
struct CellSummary {
  std::string cell_key;
  std::uint64_t trials = 0;
  std::uint64_t censored = 0;
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool unusable = false;
};

struct ScalingFit {
  double alpha;
  double alpha_se;
  std::size_t points;
};

struct ExperimentSummary {
  std::string experiment_id;
  std::vector<CellSummary> cells;
  std::optional<ScalingFit> fit;  // ln(mean) on ln(n) over clean fixed-length cells
  double truncation_mass = 0.0;   // rate-distribution metadata, 0 otherwise
  std::uint32_t threads_used = 1;
};

struct ExperimentResult {
  ExperimentSummary summary;
  std::vector<RawRecord> raw;  // ordered by (cell_index, trial_index)
};

/// Run all cells. Per-trial seeds are derive_seed(derive_seed(master_seed,
/// cell_index), trial_index), so results are identical for any thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Least-squares slope of ln T over ln n. Needs >= 3 points with positive
/// coordinates and at least two distinct n.
ScalingFit fit_scaling(std::span<const std::pair<double, double>> points);

/// Thread count resolution: hint, else EA_LAB_THREADS, else hardware.
std::uint32_t resolve_threads(std::uint32_t hint);

/// Canonical cell key: "n=32" for fixed lengths, "q=1/8,N=80" style for
/// length distributions.
std::string default_cell_key(const std::variant<std::uint32_t, LengthDistribution>& length);

}  // namespace ealab
