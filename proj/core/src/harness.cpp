#include "ealab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace ealab {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct CellPlan {
  std::uint32_t index = 0;
  std::string key;
  FitnessFamily family{};
  bool random_mask = false;
  PlacementPolicy placement;
  std::optional<LengthDistribution> dist;  // nullopt => fixed length
  std::uint32_t fixed_n = 0;
  std::uint64_t trials = 0;
  std::uint64_t budget = 0;
  std::uint64_t cell_seed = 0;

  SchemeKind scheme_kind{};
  double uniform_p = 0.0;
  std::shared_ptr<const VectorRateTable> table;
  std::shared_ptr<const RateDistribution> rate_dist;
};

std::uint32_t max_length(const CellSpec& cell) {
  if (const auto* n = std::get_if<std::uint32_t>(&cell.length)) return *n;
  return support_bound(std::get<LengthDistribution>(cell.length));
}

double resolve_uniform_rate(const RateRule& rule, const CellSpec& cell) {
  const auto* dist = std::get_if<LengthDistribution>(&cell.length);
  switch (rule.kind) {
    case RateRuleKind::literal:
      return rule.value;
    case RateRuleKind::q_value:
    case RateRuleKind::q_over_2: {
      if (!dist || dist->kind() == LengthKind::fixed)
        throw std::invalid_argument("scheme rate '" +
                                    std::string(rule.kind == RateRuleKind::q_value ? "q" : "q/2") +
                                    "' needs a geometric length distribution (cell " +
                                    cell.key + ")");
      return rule.kind == RateRuleKind::q_value ? dist->q() : dist->q() / 2.0;
    }
    case RateRuleKind::one_over_n: {
      if (const auto* n = std::get_if<std::uint32_t>(&cell.length))
        return 1.0 / static_cast<double>(*n);
      if (dist->kind() != LengthKind::geometric)
        return 1.0 / static_cast<double>(dist->n_max());
      throw std::invalid_argument(
          "scheme rate '1/N' needs a bounded length (cell " + cell.key + ")");
    }
  }
  throw std::logic_error("resolve_uniform_rate: unknown rule");
}

CellPlan build_plan(const ExperimentConfig& cfg, std::uint32_t cell_index,
                    std::shared_ptr<const RateDistribution> shared_q) {
  const CellSpec& cell = cfg.cells[cell_index];
  CellPlan plan;
  plan.index = cell_index;
  plan.key = cell.key;
  plan.family = cfg.function.family;
  plan.random_mask = cfg.function.random_mask;
  plan.placement = cfg.function.placement;
  plan.trials = cell.trials;
  plan.budget = cfg.budget;
  plan.cell_seed = derive_seed(cfg.master_seed, cell_index);
  plan.scheme_kind = cfg.scheme.kind;

  if (const auto* n = std::get_if<std::uint32_t>(&cell.length))
    plan.fixed_n = *n;
  else
    plan.dist = std::get<LengthDistribution>(cell.length);

  const std::uint32_t len_bound = max_length(cell);
  if (plan.placement.kind != PlacementKind::none) {
    if (plan.dist)
      throw std::invalid_argument(
          "placement: relevant-position policies need fixed-length cells (cell " +
          cell.key + ")");
    const std::uint32_t relevant =
        plan.placement.kind == PlacementKind::explicit_list
            ? static_cast<std::uint32_t>(plan.placement.positions.size())
            : plan.placement.relevant;
    if (relevant == 0 || relevant > len_bound)
      throw std::invalid_argument("placement: relevant bit count outside [1, n] (cell " +
                                  cell.key + ")");
  }

  switch (cfg.scheme.kind) {
    case SchemeKind::uniform:
      plan.uniform_p = resolve_uniform_rate(cfg.scheme.rate, cell);
      if (!(plan.uniform_p >= 0.0 && plan.uniform_p <= 1.0))
        throw std::invalid_argument("uniform rate outside [0,1] (cell " + cell.key + ")");
      break;
    case SchemeKind::vector_sequence: {
      SequenceFamily seq = *cfg.scheme.sequence;
      if (cfg.scheme.normalize_target)
        seq = seq.scaled_by(normalized_scale(seq, *cfg.scheme.normalize_target));
      std::vector<double> rates(len_bound);
      for (std::uint32_t i = 0; i < len_bound; ++i) rates[i] = term(seq, i + 1);
      plan.table = VectorRateTable::build(std::move(rates));
      break;
    }
    case SchemeKind::vector_literal: {
      if (cfg.scheme.literal_rates.size() < len_bound)
        throw std::invalid_argument("literal rate vector shorter than cell length (cell " +
                                    cell.key + ")");
      std::vector<double> rates(cfg.scheme.literal_rates.begin(),
                                cfg.scheme.literal_rates.begin() + len_bound);
      plan.table = VectorRateTable::build(std::move(rates));
      break;
    }
    case SchemeKind::random_rate:
      plan.rate_dist = std::move(shared_q);
      break;
  }
  return plan;
}

std::vector<std::uint32_t> draw_distinct_positions(std::uint32_t count,
                                                   std::uint32_t bound,
                                                   RngStream& rng) {
  std::vector<std::uint32_t> idx(bound);
  std::iota(idx.begin(), idx.end(), 1u);  // 1-based
  for (std::uint32_t j = 0; j < count; ++j) {
    const auto k = j + static_cast<std::uint32_t>(rng.uniform_below(bound - j));
    std::swap(idx[j], idx[k]);
  }
  idx.resize(count);
  return idx;
}

RawRecord run_trial(const CellPlan& plan, std::uint64_t trial_index) {
  const std::uint64_t seed = derive_seed(plan.cell_seed, trial_index);
  RngStream rng(seed);
  const std::uint32_t n = plan.dist ? sample_length(*plan.dist, rng) : plan.fixed_n;

  FitnessSpec spec(plan.family, n);
  if (plan.random_mask) spec.xor_mask(BitGenome::random(n, rng));
  switch (plan.placement.kind) {
    case PlacementKind::none:
      break;
    case PlacementKind::random:
      spec.relevant_positions(draw_distinct_positions(plan.placement.relevant, n, rng));
      break;
    case PlacementKind::contiguous: {
      std::vector<std::uint32_t> pos(plan.placement.relevant);
      std::iota(pos.begin(), pos.end(), 1u);
      spec.relevant_positions(std::move(pos));
      break;
    }
    case PlacementKind::explicit_list:
      spec.relevant_positions(plan.placement.positions);
      break;
  }
  const FitnessEval eval(spec);

  RunRecord rec{};
  switch (plan.scheme_kind) {
    case SchemeKind::uniform: {
      Mutator mutator(n, MutationScheme{UniformFixed{plan.uniform_p}});
      rec = run_ea_core(eval, mutator, plan.budget, rng, n, seed);
      break;
    }
    case SchemeKind::vector_sequence:
    case SchemeKind::vector_literal: {
      Mutator mutator(n, plan.table);
      rec = run_ea_core(eval, mutator, plan.budget, rng, n, seed);
      break;
    }
    case SchemeKind::random_rate: {
      Mutator mutator(n, MutationScheme{RandomRate{plan.rate_dist}});
      rec = run_ea_core(eval, mutator, plan.budget, rng, n, seed);
      break;
    }
  }
  return {plan.index, trial_index, seed, rec.realized_length, rec.evaluations,
          rec.hit_budget};
}

CellSummary summarize_cell(const CellPlan& plan,
                           std::span<const RawRecord> rows) {
  CellSummary s;
  s.cell_key = plan.key;
  s.trials = rows.size();
  double sum = 0.0;
  std::uint64_t kept = 0;
  for (const auto& r : rows) {
    if (r.hit_budget) {
      ++s.censored;
    } else {
      sum += static_cast<double>(r.evaluations);
      ++kept;
    }
  }
  s.unusable = 2 * s.censored > s.trials;
  if (kept == 0) {
    s.mean = s.sd = s.se = s.ci_lo = s.ci_hi = kNan;
    return s;
  }
  s.mean = sum / static_cast<double>(kept);
  double ss = 0.0;
  for (const auto& r : rows)
    if (!r.hit_budget) {
      const double d = static_cast<double>(r.evaluations) - s.mean;
      ss += d * d;
    }
  s.sd = kept > 1 ? std::sqrt(ss / static_cast<double>(kept - 1)) : 0.0;
  s.se = s.sd / std::sqrt(static_cast<double>(kept));
  s.ci_lo = s.mean - 1.96 * s.se;
  s.ci_hi = s.mean + 1.96 * s.se;
  return s;
}

}  // namespace

std::string default_cell_key(
    const std::variant<std::uint32_t, LengthDistribution>& length) {
  if (const auto* n = std::get_if<std::uint32_t>(&length))
    return "n=" + std::to_string(*n);
  const auto& d = std::get<LengthDistribution>(length);
  auto q_text = [](double q) {
    const double inv = 1.0 / q;
    const double rounded = std::round(inv);
    if (std::abs(inv - rounded) < 1e-9 * inv)
      return "1/" + std::to_string(static_cast<long long>(rounded));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", q);
    return std::string(buf);
  };
  switch (d.kind()) {
    case LengthKind::fixed:
      return "n=" + std::to_string(d.n_max());
    case LengthKind::geometric:
      return "q=" + q_text(d.q());
    case LengthKind::truncated_geometric:
      return "q=" + q_text(d.q()) + ",N=" + std::to_string(d.n_max());
  }
  return "?";
}

std::uint32_t resolve_threads(std::uint32_t hint) {
  if (hint > 0) return hint;
  if (const char* env = std::getenv("EA_LAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::uint32_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.cells.empty())
    throw std::invalid_argument("run_experiment: no cells configured");
  if (cfg.budget < 1)
    throw std::invalid_argument("run_experiment: budget must be >= 1");
  for (const auto& cell : cfg.cells)
    if (cell.trials < 1)
      throw std::invalid_argument("run_experiment: trials must be >= 1 (cell " +
                                  cell.key + ")");

  // one rate distribution shared by all cells
  std::shared_ptr<const RateDistribution> shared_q;
  if (cfg.scheme.kind == SchemeKind::random_rate) {
    if (!cfg.scheme.sequence)
      throw std::invalid_argument("run_experiment: random_rate scheme needs a sequence");
    shared_q = RateDistribution::from_sequence(*cfg.scheme.sequence, cfg.scheme.cap);
  }

  std::vector<CellPlan> plans;
  plans.reserve(cfg.cells.size());
  std::vector<std::uint64_t> offsets(cfg.cells.size() + 1, 0);
  for (std::uint32_t c = 0; c < cfg.cells.size(); ++c) {
    plans.push_back(build_plan(cfg, c, shared_q));
    offsets[c + 1] = offsets[c] + plans[c].trials;
  }
  const std::uint64_t total = offsets.back();

  ExperimentResult result;
  result.raw.resize(total);

  const std::uint32_t threads =
      static_cast<std::uint32_t>(std::min<std::uint64_t>(resolve_threads(cfg.threads), total));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    try {
      for (;;) {
        const std::uint64_t t = next.fetch_add(1, std::memory_order_relaxed);
        if (t >= total) return;
        const auto cell = static_cast<std::uint32_t>(
            std::upper_bound(offsets.begin(), offsets.end(), t) - offsets.begin() - 1);
        result.raw[t] = run_trial(plans[cell], t - offsets[cell]);
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      next.store(total, std::memory_order_relaxed);  // drain remaining work
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::uint32_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  ExperimentSummary& summary = result.summary;
  summary.experiment_id = cfg.id;
  summary.threads_used = threads;
  if (shared_q) summary.truncation_mass = shared_q->truncation_mass();
  summary.cells.reserve(plans.size());
  for (std::uint32_t c = 0; c < plans.size(); ++c)
    summary.cells.push_back(summarize_cell(
        plans[c], std::span<const RawRecord>(result.raw.data() + offsets[c],
                                             plans[c].trials)));

  // scaling fit over clean fixed-length cells
  std::vector<std::pair<double, double>> points;
  for (std::uint32_t c = 0; c < plans.size(); ++c) {
    if (plans[c].dist) continue;
    const CellSummary& s = summary.cells[c];
    if (s.censored > 0 || !(s.mean > 0.0)) continue;
    points.emplace_back(static_cast<double>(plans[c].fixed_n), s.mean);
  }
  if (points.size() >= 3) {
    try {
      summary.fit = fit_scaling(points);
    } catch (const std::invalid_argument&) {
      // degenerate sweep (e.g. all lengths equal); no fit reported
    }
  }
  return result;
}

ScalingFit fit_scaling(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3)
    throw std::invalid_argument("fit_scaling: need at least 3 points");
  const auto m = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, t] : points) {
    if (!(n > 0.0) || !(t > 0.0))
      throw std::invalid_argument("fit_scaling: points must be positive");
    sx += std::log(n);
    sy += std::log(t);
  }
  const double xbar = sx / m, ybar = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [n, t] : points) {
    const double dx = std::log(n) - xbar, dy = std::log(t) - ybar;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0)
    throw std::invalid_argument("fit_scaling: all n identical");
  const double alpha = sxy / sxx;
  const double rss = std::max(0.0, syy - alpha * sxy);
  const double alpha_se =
      points.size() > 2 ? std::sqrt(rss / (m - 2.0) / sxx) : 0.0;
  return {alpha, alpha_se, points.size()};
}

}  // namespace ealab
