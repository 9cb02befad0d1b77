#include "ealab/presets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace ealab {
namespace {

// q grid used by the truncated-geometric sweeps, with N = 10/q
const std::vector<std::pair<std::uint32_t, double>> kQGrid = {
    {80, 1.0 / 8}, {160, 1.0 / 16}, {320, 1.0 / 32}, {640, 1.0 / 64}, {1280, 1.0 / 128}};

CellSpec fixed_cell(std::uint32_t n, std::uint64_t trials) {
  return {default_cell_key(n), n, trials};
}

CellSpec dist_cell(const LengthDistribution& d, std::uint64_t trials) {
  return {default_cell_key(d), d, trials};
}

std::vector<CellSpec> qgrid_cells(std::uint64_t trials, std::size_t points = kQGrid.size()) {
  std::vector<CellSpec> cells;
  for (std::size_t i = 0; i < points; ++i) {
    const auto& [n_max, q] = kQGrid[i];
    cells.push_back(dist_cell(LengthDistribution::truncated_geometric(n_max, q), trials));
  }
  return cells;
}

SchemeTemplate uniform_rule(RateRuleKind kind, double value = 0.0) {
  SchemeTemplate s;
  s.kind = SchemeKind::uniform;
  s.rate = {kind, value};
  return s;
}

SchemeTemplate cathabard_vector() {
  SchemeTemplate s;
  s.kind = SchemeKind::vector_sequence;
  s.sequence = SequenceFamily::cathabard_shift();
  return s;
}

SchemeTemplate summable_vector(double eps, double target) {
  SchemeTemplate s;
  s.kind = SchemeKind::vector_sequence;
  s.sequence = SequenceFamily::log_power(1, eps);
  s.normalize_target = target;
  return s;
}

SchemeTemplate random_rate_scheme(double eps, std::uint64_t cap = 1ull << 20) {
  SchemeTemplate s;
  s.kind = SchemeKind::random_rate;
  s.sequence = SequenceFamily::log_power(1, eps);
  s.cap = cap;
  return s;
}

ExperimentConfig base(std::string id, FitnessFamily family, SchemeTemplate scheme,
                      std::vector<CellSpec> cells, std::uint64_t budget,
                      std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.id = std::move(id);
  cfg.function.family = family;
  cfg.scheme = std::move(scheme);
  cfg.cells = std::move(cells);
  cfg.budget = budget;
  cfg.master_seed = seed;
  return cfg;
}

using Suite = std::vector<ExperimentConfig>;

Suite lo_exact_grid() {
  // uniform rate 1/n at n in {10, 32, 64}: Monte Carlo against the exact
  // LeadingOnes formula
  return {base("lo-exact-grid", FitnessFamily::leading_ones,
               uniform_rule(RateRuleKind::one_over_n),
               {fixed_cell(10, 100000), fixed_cell(32, 100000), fixed_cell(64, 100000)},
               100000, 9001)};
}

Suite lo_vector_check() {
  SchemeTemplate pair;
  pair.kind = SchemeKind::vector_literal;
  pair.literal_rates = {0.5, 0.25};
  return {
      base("lo-vector-check-pair", FitnessFamily::leading_ones, pair,
           {fixed_cell(2, 100000)}, 10000, 9002),
      base("lo-vector-check-logpower16", FitnessFamily::leading_ones,
           summable_vector(1.0, 0.5), {fixed_cell(16, 100000)}, 100000, 9003),
  };
}

Suite om_sandwich() {
  return {base("om-sandwich", FitnessFamily::one_max,
               uniform_rule(RateRuleKind::literal, 0.01), {fixed_cell(100, 10000)},
               1000000, 9004)};
}

Suite table2(const std::string& which) {
  const bool lo = which.ends_with("-lo");
  const FitnessFamily fam = lo ? FitnessFamily::leading_ones : FitnessFamily::one_max;
  if (which.starts_with("table2-q-half"))
    return {base(which, fam, uniform_rule(RateRuleKind::q_over_2), qgrid_cells(2000),
                 1000000, 9010)};
  // rates p = q sit in the Theta(N/q)+A regime on LeadingOnes: rare long
  // lengths censor occasionally, which the summary flags
  if (which.starts_with("table2-q-"))
    return {base(which, fam, uniform_rule(RateRuleKind::q_value),
                 qgrid_cells(lo ? 1000 : 500), lo ? 50000000 : 10000000, 9011)};
  if (which.starts_with("table2-1overn"))
    return {base(which, fam, uniform_rule(RateRuleKind::one_over_n), qgrid_cells(1000),
                 lo ? 10000000 : 1000000, 9012)};
  // 1/(i+1) rates; the LeadingOnes variant grows like q^-3, keep it light
  if (lo)
    return {base(which, fam, cathabard_vector(), qgrid_cells(500, 4), 100000000, 9013)};
  return {base(which, fam, cathabard_vector(), qgrid_cells(500), 10000000, 9013)};
}

Suite crossover_pkl() {
  // 1/N rates vs 1/(i+1) rates on LeadingOnes with TruncGeo(64, q):
  // 1/N wins at q = 1/64 < 1/sqrt(N), 1/(i+1) wins at q = 1/4
  const auto small_q = LengthDistribution::truncated_geometric(64, 1.0 / 64);
  const auto large_q = LengthDistribution::truncated_geometric(64, 0.25);
  return {
      base("crossover-pkl-unif-qsmall", FitnessFamily::leading_ones,
           uniform_rule(RateRuleKind::one_over_n), {dist_cell(small_q, 10000)}, 1000000,
           9020),
      base("crossover-pkl-shift-qsmall", FitnessFamily::leading_ones, cathabard_vector(),
           {dist_cell(small_q, 10000)}, 1000000, 9021),
      base("crossover-pkl-unif-qlarge", FitnessFamily::leading_ones,
           uniform_rule(RateRuleKind::one_over_n), {dist_cell(large_q, 10000)}, 1000000,
           9022),
      base("crossover-pkl-shift-qlarge", FitnessFamily::leading_ones, cathabard_vector(),
           {dist_cell(large_q, 10000)}, 1000000, 9023),
  };
}

Suite neg_uniform_lo() {
  // constant rate on growing LeadingOnes lengths: the censored fraction
  // explodes with n
  return {base("neg-uniform-lo", FitnessFamily::leading_ones,
               uniform_rule(RateRuleKind::literal, 0.25),
               {fixed_cell(16, 200), fixed_cell(20, 200), fixed_cell(24, 200),
                fixed_cell(28, 200), fixed_cell(32, 200), fixed_cell(40, 200)},
               200000, 9030)};
}

Suite cor16_lo_scaling() {
  std::vector<CellSpec> cells;
  for (std::uint32_t n : {32u, 64u, 128u, 256u, 512u}) cells.push_back(fixed_cell(n, 2000));
  return {base("cor16-lo-scaling", FitnessFamily::leading_ones, summable_vector(0.5, 0.5),
               std::move(cells), 40000000, 9040)};
}

Suite cor16_censor_contrast() {
  return {
      base("cor16-censor-contrast-uniform", FitnessFamily::leading_ones,
           uniform_rule(RateRuleKind::literal, 0.05),
           {fixed_cell(256, 50), fixed_cell(512, 50)}, 10000000, 9041),
      base("cor16-censor-contrast-summable", FitnessFamily::leading_ones,
           summable_vector(0.5, 0.5), {fixed_cell(256, 200), fixed_cell(512, 200)},
           10000000, 9042),
  };
}

Suite cor19_om_scaling() {
  const std::uint32_t lens[] = {64, 128, 256, 512, 1024, 2048};
  const std::uint64_t trials[] = {2000, 2000, 2000, 1000, 600, 500};
  std::vector<CellSpec> cells;
  for (int i = 0; i < 6; ++i) cells.push_back(fixed_cell(lens[i], trials[i]));
  return {base("cor19-om-scaling", FitnessFamily::one_max, random_rate_scheme(0.5),
               std::move(cells), 20000000, 9050)};
}

Suite cor19_lo_scaling() {
  const std::uint32_t lens[] = {32, 64, 128, 256, 512};
  const std::uint64_t trials[] = {2000, 2000, 1000, 400, 200};
  std::vector<CellSpec> cells;
  for (int i = 0; i < 5; ++i) cells.push_back(fixed_cell(lens[i], trials[i]));
  return {base("cor19-lo-scaling", FitnessFamily::leading_ones, random_rate_scheme(0.5),
               std::move(cells), 100000000, 9051)};
}

Suite scattered_invariance() {
  // 128 relevant bits inside genomes of growing length; runtime must not
  // depend on the genome length or on where the bits sit
  Suite out;
  for (const bool random_placement : {true, false}) {
    ExperimentConfig cfg = base(
        random_placement ? "scattered-invariance-random" : "scattered-invariance-contiguous",
        FitnessFamily::one_max, random_rate_scheme(0.5),
        {fixed_cell(256, 10000), fixed_cell(512, 10000), fixed_cell(1024, 10000)},
        2000000, random_placement ? 9060 : 9061);
    cfg.function.placement.kind =
        random_placement ? PlacementKind::random : PlacementKind::contiguous;
    cfg.function.placement.relevant = 128;
    out.push_back(std::move(cfg));
  }
  return out;
}

Suite table2_ordering_n64() {
  const auto dist = LengthDistribution::truncated_geometric(64, 1.0 / 64);
  return {
      base("table2-ordering-qhalf", FitnessFamily::leading_ones,
           uniform_rule(RateRuleKind::q_over_2), {dist_cell(dist, 3000)}, 1000000, 9070),
      base("table2-ordering-shift", FitnessFamily::leading_ones, cathabard_vector(),
           {dist_cell(dist, 3000)}, 1000000, 9071),
      base("table2-ordering-fixed", FitnessFamily::leading_ones,
           uniform_rule(RateRuleKind::literal, 0.25), {dist_cell(dist, 300)}, 200000,
           9072),
  };
}

Suite geo_mixture_check() {
  return {base("geo-mixture-check", FitnessFamily::one_max,
               uniform_rule(RateRuleKind::q_over_2),
               {dist_cell(LengthDistribution::geometric(0.5), 100000)}, 1000000, 9080)};
}

Suite truncgeo_mixture_check() {
  return {base("truncgeo-mixture-check", FitnessFamily::leading_ones,
               uniform_rule(RateRuleKind::q_over_2),
               {dist_cell(LengthDistribution::truncated_geometric(64, 0.125), 100000)},
               100000, 9081)};
}

std::string canonical(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return name;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> preset_catalog() {
  return {
      {"lo-exact-grid", "LeadingOnes, rate 1/n: Monte Carlo vs the exact formula"},
      {"lo-vector-check", "LeadingOnes with explicit and summable rate vectors"},
      {"om-sandwich", "OneMax at n=100, p=1/100: mean between the two bounds"},
      {"table2-q-half-lo", "TruncGeo sweep, rates q/2, LeadingOnes"},
      {"table2-q-half-om", "TruncGeo sweep, rates q/2, OneMax"},
      {"table2-q-lo", "TruncGeo sweep, rates q, LeadingOnes"},
      {"table2-q-om", "TruncGeo sweep, rates q, OneMax"},
      {"table2-1overn-lo", "TruncGeo sweep, rates 1/N, LeadingOnes"},
      {"table2-1overn-om", "TruncGeo sweep, rates 1/N, OneMax"},
      {"table2-pkl-lo", "TruncGeo sweep, rates 1/(i+1), LeadingOnes"},
      {"table2-pkl-om", "TruncGeo sweep, rates 1/(i+1), OneMax"},
      {"table2-ordering-n64", "scheme ordering at N=64: q/2 vs 1/(i+1) vs fixed 0.25"},
      {"crossover-pkl", "1/N vs 1/(i+1) on either side of q = 1/sqrt(N)"},
      {"neg-uniform-lo", "fixed rate 0.25: exponential blow-up, censoring demo"},
      {"cor16-lo-scaling", "normalized summable vector: LeadingOnes scaling fit"},
      {"cor16-censor-contrast", "budget 1e7: fixed rate censors, summable vector compared"},
      {"cor19-om-scaling", "random-rate EA: OneMax scaling fit"},
      {"cor19-lo-scaling", "random-rate EA: LeadingOnes scaling fit"},
      {"scattered-invariance", "random-rate EA: runtime ignores irrelevant bits"},
      {"geo-mixture-check", "Geo(1/2) lengths, rates q/2, OneMax mixture cross-check"},
      {"truncgeo-mixture-check", "TruncGeo(64,1/8) lengths, rates q/2, LeadingOnes"},
  };
}

std::vector<ExperimentConfig> preset_suite(const std::string& name) {
  const std::string key = canonical(name);
  if (key == "lo-exact-grid") return lo_exact_grid();
  if (key == "lo-vector-check") return lo_vector_check();
  if (key == "om-sandwich") return om_sandwich();
  if (key.starts_with("table2-q") || key.starts_with("table2-1overn") ||
      key.starts_with("table2-pkl")) {
    if (!key.ends_with("-lo") && !key.ends_with("-om"))
      throw std::invalid_argument("preset_suite: unknown preset '" + name + "'");
    return table2(key);
  }
  if (key == "table2-ordering-n64") return table2_ordering_n64();
  if (key == "crossover-pkl") return crossover_pkl();
  if (key == "neg-uniform-lo") return neg_uniform_lo();
  if (key == "cor16-lo-scaling") return cor16_lo_scaling();
  if (key == "cor16-censor-contrast") return cor16_censor_contrast();
  if (key == "cor19-om-scaling") return cor19_om_scaling();
  if (key == "cor19-lo-scaling") return cor19_lo_scaling();
  if (key == "scattered-invariance") return scattered_invariance();
  if (key == "geo-mixture-check") return geo_mixture_check();
  if (key == "truncgeo-mixture-check") return truncgeo_mixture_check();
  throw std::invalid_argument("preset_suite: unknown preset '" + name + "'");
}

}  // namespace ealab
