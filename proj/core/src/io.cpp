#include "ealab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ealab {
namespace {

using nlohmann::json;
using Severity = Diagnostic::Severity;

struct Parser {
  std::vector<Diagnostic>& diags;
  bool failed = false;

  void error(const std::string& path, const std::string& msg) {
    diags.push_back({Severity::error, path, msg});
    failed = true;
  }
  void warning(const std::string& path, const std::string& msg) {
    diags.push_back({Severity::warning, path, msg});
  }

  const json* field(const json& obj, const std::string& path, const char* key,
                    bool required = true) {
    if (!obj.is_object()) {
      error(path, "expected an object");
      return nullptr;
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) error(path + "." + key, "missing required key");
      return nullptr;
    }
    return &*it;
  }

  std::string get_string(const json& obj, const std::string& path, const char* key) {
    const json* v = field(obj, path, key);
    if (!v) return {};
    if (!v->is_string()) {
      error(path + "." + key, "expected a string");
      return {};
    }
    return v->get<std::string>();
  }

  double get_number(const json& obj, const std::string& path, const char* key,
                    bool required = true, double fallback = 0.0) {
    const json* v = field(obj, path, key, required);
    if (!v) return fallback;
    if (!v->is_number()) {
      error(path + "." + key, "expected a number");
      return fallback;
    }
    return v->get<double>();
  }

  std::uint64_t get_uint(const json& obj, const std::string& path, const char* key,
                         bool required = true, std::uint64_t fallback = 0) {
    const json* v = field(obj, path, key, required);
    if (!v) return fallback;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
      error(path + "." + key, "expected a nonnegative integer");
      return fallback;
    }
    return v->get<std::uint64_t>();
  }
};

std::optional<SequenceFamily> parse_sequence(Parser& p, const json& j,
                                             const std::string& path) {
  const std::string family = p.get_string(j, path, "family");
  if (p.failed) return std::nullopt;
  try {
    SequenceFamily seq = [&]() -> SequenceFamily {
      if (family == "harmonic") return SequenceFamily::harmonic();
      if (family == "cathabard_shift") return SequenceFamily::cathabard_shift();
      if (family == "power_law")
        return SequenceFamily::power_law(p.get_number(j, path, "eps"));
      if (family == "log_power")
        return SequenceFamily::log_power(
            static_cast<int>(p.get_uint(j, path, "s", false, 1)),
            p.get_number(j, path, "eps"));
      if (family == "geometric")
        return SequenceFamily::geometric(p.get_number(j, path, "ratio"));
      if (family == "custom") {
        const json* terms = p.field(j, path, "terms");
        if (!terms || !terms->is_array())
          throw std::invalid_argument("custom sequence needs a 'terms' array");
        return SequenceFamily::custom(terms->get<std::vector<double>>());
      }
      throw std::invalid_argument("unknown sequence family '" + family + "'");
    }();
    if (j.contains("scale")) seq = seq.scaled_by(p.get_number(j, path, "scale"));
    return seq;
  } catch (const std::exception& e) {
    p.error(path, e.what());
    return std::nullopt;
  }
}

std::optional<LengthDistribution> parse_dist(Parser& p, const json& j,
                                             const std::string& path) {
  const std::string kind = p.get_string(j, path, "kind");
  try {
    if (kind == "fixed")
      return LengthDistribution::fixed(
          static_cast<std::uint32_t>(p.get_uint(j, path, "n")));
    if (kind == "geo")
      return LengthDistribution::geometric(p.get_number(j, path, "q"));
    if (kind == "trunc_geo")
      return LengthDistribution::truncated_geometric(
          static_cast<std::uint32_t>(p.get_uint(j, path, "n_max")),
          p.get_number(j, path, "q"));
    p.error(path + ".kind", "unknown length distribution kind '" + kind + "'");
  } catch (const std::exception& e) {
    p.error(path, e.what());
  }
  return std::nullopt;
}

void parse_function(Parser& p, const json& j, ExperimentConfig& cfg) {
  const std::string family = p.get_string(j, "function", "family");
  if (family == "one_max")
    cfg.function.family = FitnessFamily::one_max;
  else if (family == "leading_ones")
    cfg.function.family = FitnessFamily::leading_ones;
  else if (!family.empty())
    p.error("function.family", "expected 'one_max' or 'leading_ones'");

  if (j.contains("mask")) {
    const std::string mask = p.get_string(j, "function", "mask");
    if (mask == "random")
      cfg.function.random_mask = true;
    else if (mask != "none")
      p.error("function.mask", "expected 'none' or 'random'");
  }

  if (!j.contains("placement")) return;
  const json& pl = j.at("placement");
  const std::string kind = p.get_string(pl, "function.placement", "kind");
  auto& placement = cfg.function.placement;
  if (kind == "none") {
    placement.kind = PlacementKind::none;
  } else if (kind == "random" || kind == "contiguous") {
    placement.kind = kind == "random" ? PlacementKind::random : PlacementKind::contiguous;
    placement.relevant = static_cast<std::uint32_t>(
        p.get_uint(pl, "function.placement", "relevant"));
  } else if (kind == "explicit") {
    placement.kind = PlacementKind::explicit_list;
    const json* pos = p.field(pl, "function.placement", "positions");
    if (pos && pos->is_array())
      placement.positions = pos->get<std::vector<std::uint32_t>>();
    else
      p.error("function.placement.positions", "expected an array of 1-based positions");
  } else {
    p.error("function.placement.kind",
            "expected 'none', 'random', 'contiguous' or 'explicit'");
  }
}

void parse_scheme(Parser& p, const json& j, ExperimentConfig& cfg) {
  const std::string kind = p.get_string(j, "scheme", "kind");
  auto& scheme = cfg.scheme;
  if (kind == "uniform") {
    scheme.kind = SchemeKind::uniform;
    const json* rate = p.field(j, "scheme", "rate");
    if (!rate) return;
    const std::string rk = p.get_string(*rate, "scheme.rate", "kind");
    if (rk == "literal") {
      scheme.rate = {RateRuleKind::literal, p.get_number(*rate, "scheme.rate", "value")};
    } else if (rk == "q") {
      scheme.rate = {RateRuleKind::q_value, 0.0};
    } else if (rk == "q_over_2") {
      scheme.rate = {RateRuleKind::q_over_2, 0.0};
    } else if (rk == "one_over_n") {
      scheme.rate = {RateRuleKind::one_over_n, 0.0};
    } else {
      p.error("scheme.rate.kind", "expected 'literal', 'q', 'q_over_2' or 'one_over_n'");
    }
  } else if (kind == "vector") {
    const json* src = p.field(j, "scheme", "source");
    if (!src) return;
    const std::string sk = p.get_string(*src, "scheme.source", "kind");
    if (sk == "literal") {
      scheme.kind = SchemeKind::vector_literal;
      const json* rates = p.field(*src, "scheme.source", "rates");
      if (rates && rates->is_array())
        scheme.literal_rates = rates->get<std::vector<double>>();
      else
        p.error("scheme.source.rates", "expected an array of rates");
    } else if (sk == "sequence") {
      scheme.kind = SchemeKind::vector_sequence;
      scheme.sequence = parse_sequence(p, *src, "scheme.source");
      if (src->contains("normalize_target"))
        scheme.normalize_target = p.get_number(*src, "scheme.source", "normalize_target");
    } else {
      p.error("scheme.source.kind", "expected 'literal' or 'sequence'");
    }
  } else if (kind == "random_rate") {
    scheme.kind = SchemeKind::random_rate;
    const json* seq = p.field(j, "scheme", "sequence");
    if (seq) scheme.sequence = parse_sequence(p, *seq, "scheme.sequence");
    if (j.contains("cap")) scheme.cap = p.get_uint(j, "scheme", "cap");
  } else {
    p.error("scheme.kind", "expected 'uniform', 'vector' or 'random_rate'");
  }
}

void parse_length_and_trials(Parser& p, const json& root, ExperimentConfig& cfg) {
  const json* len = p.field(root, "", "length");
  if (!len) return;
  const std::string kind = p.get_string(*len, "length", "kind");

  std::vector<std::variant<std::uint32_t, LengthDistribution>> lengths;
  if (kind == "fixed") {
    lengths.emplace_back(static_cast<std::uint32_t>(p.get_uint(*len, "length", "n")));
  } else if (kind == "fixed_sweep") {
    const json* values = p.field(*len, "length", "values");
    if (values && values->is_array() && !values->empty())
      for (const auto& v : *values)
        lengths.emplace_back(v.get<std::uint32_t>());
    else
      p.error("length.values", "expected a non-empty array of lengths");
  } else if (kind == "dist") {
    const json* d = p.field(*len, "length", "dist");
    if (d) {
      auto dist = parse_dist(p, *d, "length.dist");
      if (dist) lengths.emplace_back(*dist);
    }
  } else if (kind == "dist_sweep") {
    const json* ds = p.field(*len, "length", "dists");
    if (ds && ds->is_array() && !ds->empty()) {
      for (std::size_t i = 0; i < ds->size(); ++i) {
        auto dist = parse_dist(p, (*ds)[i], "length.dists[" + std::to_string(i) + "]");
        if (dist) lengths.emplace_back(*dist);
      }
    } else {
      p.error("length.dists", "expected a non-empty array of distributions");
    }
  } else {
    p.error("length.kind", "expected 'fixed', 'fixed_sweep', 'dist' or 'dist_sweep'");
  }
  if (p.failed) return;

  std::vector<std::uint64_t> trials;
  const json* t = p.field(root, "", "trials");
  if (!t) return;
  if (t->is_array()) {
    if (t->size() != lengths.size()) {
      p.error("trials", "trials array length must match the number of cells");
      return;
    }
    for (const auto& v : *t) trials.push_back(v.get<std::uint64_t>());
  } else {
    const auto v = p.get_uint(root, "", "trials");
    trials.assign(lengths.size(), v);
  }

  for (std::size_t i = 0; i < lengths.size(); ++i)
    cfg.cells.push_back({default_cell_key(lengths[i]), lengths[i], trials[i]});
}

json sequence_to_json(const SequenceFamily& seq) {
  json j;
  switch (seq.kind()) {
    case SequenceKind::harmonic:
      j["family"] = "harmonic";
      break;
    case SequenceKind::cathabard_shift:
      j["family"] = "cathabard_shift";
      break;
    case SequenceKind::power_law:
      j["family"] = "power_law";
      j["eps"] = seq.eps();
      break;
    case SequenceKind::log_power:
      j["family"] = "log_power";
      j["s"] = seq.s();
      j["eps"] = seq.eps();
      break;
    case SequenceKind::geometric:
      j["family"] = "geometric";
      j["ratio"] = seq.ratio();
      break;
    case SequenceKind::custom:
      j["family"] = "custom";
      j["terms"] = seq.terms();
      break;
  }
  if (seq.scale() != 1.0) j["scale"] = seq.scale();
  return j;
}

json dist_to_json(const LengthDistribution& d) {
  switch (d.kind()) {
    case LengthKind::fixed:
      return {{"kind", "fixed"}, {"n", d.n_max()}};
    case LengthKind::geometric:
      return {{"kind", "geo"}, {"q", d.q()}};
    case LengthKind::truncated_geometric:
      return {{"kind", "trunc_geo"}, {"n_max", d.n_max()}, {"q", d.q()}};
  }
  return {};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ConfigLoad parse_config(const std::string& json_text) {
  ConfigLoad out;
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    out.diagnostics.push_back({Severity::error, "(document)", e.what()});
    return out;
  }

  Parser p{out.diagnostics};
  ExperimentConfig cfg;
  try {
    cfg.id = p.get_string(root, "", "id");
    if (const json* fn = p.field(root, "", "function")) parse_function(p, *fn, cfg);
    if (const json* sc = p.field(root, "", "scheme")) parse_scheme(p, *sc, cfg);
    parse_length_and_trials(p, root, cfg);
    cfg.budget = p.get_uint(root, "", "budget");
    cfg.master_seed = p.get_uint(root, "", "master_seed");
    cfg.threads = static_cast<std::uint32_t>(p.get_uint(root, "", "threads", false, 0));
  } catch (const json::exception& e) {
    p.error("(document)", e.what());
  }

  if (p.failed) return out;

  for (auto& d : validate_config(cfg)) out.diagnostics.push_back(std::move(d));
  out.config = std::move(cfg);
  return out;
}

ConfigLoad load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ConfigLoad out;
    out.diagnostics.push_back(
        {Severity::error, "(file)", "cannot read config file '" + path + "'"});
    return out;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<Diagnostic> validate_config(const ExperimentConfig& cfg) {
  std::vector<Diagnostic> diags;
  auto error = [&](const std::string& path, const std::string& msg) {
    diags.push_back({Severity::error, path, msg});
  };
  auto warning = [&](const std::string& path, const std::string& msg) {
    diags.push_back({Severity::warning, path, msg});
  };

  if (cfg.id.empty()) error("id", "experiment id must not be empty");
  if (cfg.cells.empty()) error("length", "no cells configured");
  if (cfg.budget < 1) error("budget", "budget must be >= 1");

  std::uint32_t min_fixed = 0xffffffffu;
  bool all_fixed = true;
  for (std::size_t i = 0; i < cfg.cells.size(); ++i) {
    const auto& cell = cfg.cells[i];
    const std::string where = "cells[" + std::to_string(i) + "] (" + cell.key + ")";
    if (cell.trials < 1) error(where, "trials must be >= 1");
    if (cell.trials < 1000)
      warning(where, "fewer than 1000 trials: confidence intervals are unreliable");
    if (const auto* n = std::get_if<std::uint32_t>(&cell.length)) {
      if (*n < 1) error(where, "length must be >= 1");
      min_fixed = std::min(min_fixed, *n);
    } else {
      all_fixed = false;
      const auto& d = std::get<LengthDistribution>(cell.length);
      if (d.outside_standard_regime())
        warning(where, "q outside the standard regime 1/N <= q <= 1/2");
    }
  }

  const auto& scheme = cfg.scheme;
  switch (scheme.kind) {
    case SchemeKind::uniform:
      if (scheme.rate.kind == RateRuleKind::literal &&
          !(scheme.rate.value >= 0.0 && scheme.rate.value <= 1.0))
        error("scheme.rate.value", "uniform rate " + format_double(scheme.rate.value) +
                                      " outside [0,1]");
      if (scheme.rate.kind == RateRuleKind::q_value ||
          scheme.rate.kind == RateRuleKind::q_over_2) {
        for (const auto& cell : cfg.cells)
          if (std::holds_alternative<std::uint32_t>(cell.length) ||
              std::get<LengthDistribution>(cell.length).kind() == LengthKind::fixed)
            error("scheme.rate", "rate rule needs a geometric length (cell " + cell.key + ")");
      }
      if (scheme.rate.kind == RateRuleKind::one_over_n) {
        for (const auto& cell : cfg.cells)
          if (const auto* d = std::get_if<LengthDistribution>(&cell.length);
              d && d->kind() == LengthKind::geometric)
            error("scheme.rate", "rate rule 1/N needs a bounded length (cell " + cell.key + ")");
      }
      break;
    case SchemeKind::vector_literal:
      for (std::size_t i = 0; i < scheme.literal_rates.size(); ++i)
        if (!(scheme.literal_rates[i] >= 0.0 && scheme.literal_rates[i] <= 1.0))
          error("scheme.rates[" + std::to_string(i) + "]",
                "rate " + format_double(scheme.literal_rates[i]) + " outside [0,1]");
      for (const auto& cell : cfg.cells) {
        std::uint32_t need = 0;
        if (const auto* n = std::get_if<std::uint32_t>(&cell.length))
          need = *n;
        else
          need = support_bound(std::get<LengthDistribution>(cell.length));
        if (scheme.literal_rates.size() < need)
          error("scheme.rates", "vector of " + std::to_string(scheme.literal_rates.size()) +
                                    " rates is shorter than cell " + cell.key);
      }
      break;
    case SchemeKind::vector_sequence: {
      if (!scheme.sequence) {
        error("scheme.source", "vector scheme needs a sequence");
        break;
      }
      if (scheme.normalize_target) {
        if (!(*scheme.normalize_target > 0.0 && *scheme.normalize_target < 1.0))
          error("scheme.source.normalize_target", "normalization target must be in (0,1)");
        else if (!scheme.sequence->summable())
          error("scheme.source", "normalization requires a summable sequence");
      }
      try {
        (void)term(*scheme.sequence, 1);
      } catch (const std::exception& e) {
        error("scheme.source", e.what());
      }
      break;
    }
    case SchemeKind::random_rate:
      if (!scheme.sequence) {
        error("scheme.sequence", "random_rate scheme needs a sequence");
        break;
      }
      if (!scheme.sequence->summable())
        error("scheme.sequence", "rate distribution weights must be summable");
      if (scheme.cap < 2) error("scheme.cap", "cap must be >= 2");
      break;
  }

  const auto& pl = cfg.function.placement;
  if (pl.kind != PlacementKind::none) {
    if (!all_fixed)
      error("function.placement", "relevant-position policies need fixed-length cells");
    else if (pl.kind == PlacementKind::explicit_list) {
      std::vector<std::uint32_t> sorted = pl.positions;
      std::sort(sorted.begin(), sorted.end());
      if (sorted.empty()) error("function.placement.positions", "empty position list");
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i] == sorted[i + 1])
          error("function.placement.positions",
                "positions must be pairwise distinct (duplicate " +
                    std::to_string(sorted[i]) + ")");
      if (!sorted.empty() && (sorted.front() < 1 || sorted.back() > min_fixed))
        error("function.placement.positions", "positions must lie in [1, n] for every cell");
    } else {
      if (pl.relevant < 1 || pl.relevant > min_fixed)
        error("function.placement.relevant",
              "relevant bit count must lie in [1, n] for every cell");
    }
  }
  return diags;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["id"] = cfg.id;

  json fn;
  fn["family"] =
      cfg.function.family == FitnessFamily::one_max ? "one_max" : "leading_ones";
  fn["mask"] = cfg.function.random_mask ? "random" : "none";
  switch (cfg.function.placement.kind) {
    case PlacementKind::none:
      fn["placement"] = {{"kind", "none"}};
      break;
    case PlacementKind::random:
      fn["placement"] = {{"kind", "random"}, {"relevant", cfg.function.placement.relevant}};
      break;
    case PlacementKind::contiguous:
      fn["placement"] = {{"kind", "contiguous"},
                         {"relevant", cfg.function.placement.relevant}};
      break;
    case PlacementKind::explicit_list:
      fn["placement"] = {{"kind", "explicit"},
                         {"positions", cfg.function.placement.positions}};
      break;
  }
  j["function"] = std::move(fn);

  json sc;
  switch (cfg.scheme.kind) {
    case SchemeKind::uniform: {
      sc["kind"] = "uniform";
      json rate;
      switch (cfg.scheme.rate.kind) {
        case RateRuleKind::literal:
          rate = {{"kind", "literal"}, {"value", cfg.scheme.rate.value}};
          break;
        case RateRuleKind::q_value:
          rate = {{"kind", "q"}};
          break;
        case RateRuleKind::q_over_2:
          rate = {{"kind", "q_over_2"}};
          break;
        case RateRuleKind::one_over_n:
          rate = {{"kind", "one_over_n"}};
          break;
      }
      sc["rate"] = std::move(rate);
      break;
    }
    case SchemeKind::vector_literal:
      sc["kind"] = "vector";
      sc["source"] = {{"kind", "literal"}, {"rates", cfg.scheme.literal_rates}};
      break;
    case SchemeKind::vector_sequence: {
      sc["kind"] = "vector";
      json src = sequence_to_json(*cfg.scheme.sequence);
      src["kind"] = "sequence";
      if (cfg.scheme.normalize_target)
        src["normalize_target"] = *cfg.scheme.normalize_target;
      sc["source"] = std::move(src);
      break;
    }
    case SchemeKind::random_rate:
      sc["kind"] = "random_rate";
      sc["sequence"] = sequence_to_json(*cfg.scheme.sequence);
      sc["cap"] = cfg.scheme.cap;
      break;
  }
  j["scheme"] = std::move(sc);

  const bool all_fixed = std::all_of(
      cfg.cells.begin(), cfg.cells.end(), [](const CellSpec& c) {
        return std::holds_alternative<std::uint32_t>(c.length);
      });
  json len;
  if (all_fixed) {
    if (cfg.cells.size() == 1) {
      len = {{"kind", "fixed"}, {"n", std::get<std::uint32_t>(cfg.cells[0].length)}};
    } else {
      len["kind"] = "fixed_sweep";
      json values = json::array();
      for (const auto& c : cfg.cells) values.push_back(std::get<std::uint32_t>(c.length));
      len["values"] = std::move(values);
    }
  } else {
    if (cfg.cells.size() == 1) {
      len = {{"kind", "dist"},
             {"dist", dist_to_json(std::get<LengthDistribution>(cfg.cells[0].length))}};
    } else {
      len["kind"] = "dist_sweep";
      json dists = json::array();
      for (const auto& c : cfg.cells)
        dists.push_back(dist_to_json(std::get<LengthDistribution>(c.length)));
      len["dists"] = std::move(dists);
    }
  }
  j["length"] = std::move(len);

  const bool same_trials = std::all_of(
      cfg.cells.begin(), cfg.cells.end(),
      [&](const CellSpec& c) { return c.trials == cfg.cells[0].trials; });
  if (same_trials) {
    j["trials"] = cfg.cells[0].trials;
  } else {
    json trials = json::array();
    for (const auto& c : cfg.cells) trials.push_back(c.trials);
    j["trials"] = std::move(trials);
  }
  j["budget"] = cfg.budget;
  j["master_seed"] = cfg.master_seed;
  j["threads"] = cfg.threads;
  return j.dump(2) + "\n";
}

std::string raw_csv(const ExperimentResult& result) {
  std::string out =
      "experiment_id,cell_key,trial_index,seed,realized_length,evaluations,hit_budget\n";
  const auto& id = result.summary.experiment_id;
  for (const auto& r : result.raw) {
    out += id;
    out += ',';
    out += result.summary.cells[r.cell_index].cell_key;
    out += ',';
    out += std::to_string(r.trial_index);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.realized_length);
    out += ',';
    out += std::to_string(r.evaluations);
    out += ',';
    out += r.hit_budget ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string summary_csv(const ExperimentResult& result) {
  std::string out = "experiment_id,cell_key,trials,censored,mean,sd,se,ci_lo,ci_hi\n";
  for (const auto& c : result.summary.cells) {
    out += result.summary.experiment_id;
    out += ',';
    out += c.cell_key;
    out += ',';
    out += std::to_string(c.trials);
    out += ',';
    out += std::to_string(c.censored);
    out += ',';
    out += format_double(c.mean);
    out += ',';
    out += format_double(c.sd);
    out += ',';
    out += format_double(c.se);
    out += ',';
    out += format_double(c.ci_lo);
    out += ',';
    out += format_double(c.ci_hi);
    out += '\n';
  }
  return out;
}

std::string raw_json(const ExperimentResult& result) {
  json records = json::array();
  const auto& id = result.summary.experiment_id;
  for (const auto& r : result.raw)
    records.push_back({{"experiment_id", id},
                       {"cell_key", result.summary.cells[r.cell_index].cell_key},
                       {"trial_index", r.trial_index},
                       {"seed", r.seed},
                       {"realized_length", r.realized_length},
                       {"evaluations", r.evaluations},
                       {"hit_budget", r.hit_budget}});
  return json{{"records", std::move(records)}}.dump(2) + "\n";
}

std::string summary_json(const ExperimentResult& result) {
  json cells = json::array();
  for (const auto& c : result.summary.cells)
    cells.push_back({{"experiment_id", result.summary.experiment_id},
                     {"cell_key", c.cell_key},
                     {"trials", c.trials},
                     {"censored", c.censored},
                     {"mean", c.mean},
                     {"sd", c.sd},
                     {"se", c.se},
                     {"ci_lo", c.ci_lo},
                     {"ci_hi", c.ci_hi}});
  json j{{"summary", std::move(cells)}};
  if (result.summary.fit) {
    j["fit"] = {{"alpha", result.summary.fit->alpha},
                {"alpha_se", result.summary.fit->alpha_se},
                {"points", result.summary.fit->points}};
  } else {
    j["fit"] = nullptr;
  }
  json unusable = json::array();
  for (const auto& c : result.summary.cells)
    if (c.unusable) unusable.push_back(c.cell_key);
  j["metadata"] = {{"truncation_mass", result.summary.truncation_mass},
                   {"threads_used", result.summary.threads_used},
                   {"unusable_cells", std::move(unusable)}};
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

}  // namespace ealab
