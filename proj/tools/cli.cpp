#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ealab/analytic.hpp"
#include "ealab/io.hpp"
#include "ealab/presets.hpp"

namespace ealab::cli {
namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void print_analytic_row(const std::string& formula, const std::string& params,
                        const BoundReport& r) {
  const char* kind = r.kind == BoundKind::exact        ? "exact"
                     : r.kind == BoundKind::upper_bound ? "upper_bound"
                                                        : "lower_bound";
  char value[40];
  std::snprintf(value, sizeof value, "%.12g", r.value);
  std::cout << formula << ',' << csv_escape(params) << ',' << value << ',' << kind
            << ',' << csv_escape(r.validity) << '\n';
}

void print_diagnostics(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    std::cerr << (d.severity == Diagnostic::Severity::error ? "error: " : "warning: ")
              << d.path << ": " << d.message << '\n';
}

void print_summary(const ExperimentResult& result) {
  char line[256];
  std::cout << "experiment " << result.summary.experiment_id << " ("
            << result.summary.threads_used << " threads)\n";
  for (const auto& c : result.summary.cells) {
    std::snprintf(line, sizeof line,
                  "  %-24s trials=%llu censored=%llu mean=%.6g sd=%.6g ci=[%.6g, %.6g]%s\n",
                  c.cell_key.c_str(), static_cast<unsigned long long>(c.trials),
                  static_cast<unsigned long long>(c.censored), c.mean, c.sd, c.ci_lo,
                  c.ci_hi, c.unusable ? "  [unusable: >50% censored]" : "");
    std::cout << line;
  }
  if (result.summary.fit) {
    std::snprintf(line, sizeof line, "  scaling fit: alpha=%.4f (se %.4f, %zu points)\n",
                  result.summary.fit->alpha, result.summary.fit->alpha_se,
                  result.summary.fit->points);
    std::cout << line;
  }
  if (result.summary.truncation_mass > 0.0) {
    std::snprintf(line, sizeof line, "  rate distribution truncation mass: %.3g\n",
                  result.summary.truncation_mass);
    std::cout << line;
  }
}

std::string summary_path(const std::string& out, const std::string& ext) {
  const fs::path p(out);
  fs::path dir = p.parent_path();
  std::string stem = p.stem().string();
  if (stem.empty()) stem = "result";
  return (dir / (stem + ".summary" + ext)).string();
}

int write_outputs(const ExperimentResult& result, const std::string& out,
                  const std::string& format) {
  const bool as_json = format == "json";
  const std::string ext = as_json ? ".json" : ".csv";
  write_file_atomic(out, as_json ? raw_json(result) : raw_csv(result));
  write_file_atomic(summary_path(out, ext),
                    as_json ? summary_json(result) : summary_csv(result));
  return kOk;
}

struct RunOptions {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> threads;
  std::string format = "csv";
};

int cmd_run(const RunOptions& opt) {
  ConfigLoad load = load_config_file(opt.config_path);
  print_diagnostics(load.diagnostics);
  if (!load.ok()) return kConfigError;
  ExperimentConfig cfg = *load.config;
  if (opt.seed) cfg.master_seed = *opt.seed;
  if (opt.threads) cfg.threads = *opt.threads;
  const ExperimentResult result = run_experiment(cfg);
  print_summary(result);
  return write_outputs(result, opt.out_path, opt.format);
}

struct SweepOptions {
  std::string preset;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> threads;
  std::string format = "csv";
};

int cmd_sweep(const SweepOptions& opt) {
  std::vector<ExperimentConfig> configs;
  try {
    configs = preset_suite(opt.preset);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  fs::create_directories(opt.out_dir);
  const std::string ext = opt.format == "json" ? ".json" : ".csv";
  for (ExperimentConfig cfg : configs) {
    if (opt.seed) cfg.master_seed = *opt.seed;
    if (opt.threads) cfg.threads = *opt.threads;
    const ExperimentResult result = run_experiment(cfg);
    print_summary(result);
    write_outputs(result, (fs::path(opt.out_dir) / (cfg.id + ext)).string(), opt.format);
  }
  return kOk;
}

int cmd_presets(const std::string& name) {
  if (name.empty()) {
    char line[256];
    for (const auto& [preset, description] : preset_catalog()) {
      std::snprintf(line, sizeof line, "%-26s %s\n", preset.c_str(), description.c_str());
      std::cout << line;
    }
    return kOk;
  }
  std::vector<ExperimentConfig> configs;
  try {
    configs = preset_suite(name);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& cfg : configs) arr.push_back(nlohmann::json::parse(config_to_json(cfg)));
  std::cout << arr.dump(2) << '\n';
  return kOk;
}

int cmd_validate(const std::string& path) {
  const ConfigLoad load = load_config_file(path);
  print_diagnostics(load.diagnostics);
  if (!load.ok()) return kConfigError;
  std::uint64_t warnings = 0;
  for (const auto& d : load.diagnostics)
    if (d.severity == Diagnostic::Severity::warning) ++warnings;
  std::cout << "ok: " << load.config->cells.size() << " cell(s), " << warnings
            << " warning(s)\n";
  return kOk;
}

// flag bundle for building a sequence family on the command line
struct SeqFlags {
  std::string family;
  int s = 1;
  double eps = 1.0;
  double ratio = 0.5;
  double scale = 1.0;
  std::optional<double> normalize;

  SequenceFamily build() const {
    SequenceFamily seq = [&]() {
      if (family == "harmonic") return SequenceFamily::harmonic();
      if (family == "cathabard_shift") return SequenceFamily::cathabard_shift();
      if (family == "power_law") return SequenceFamily::power_law(eps);
      if (family == "log_power") return SequenceFamily::log_power(s, eps);
      if (family == "geometric") return SequenceFamily::geometric(ratio);
      throw std::invalid_argument("unknown sequence family '" + family + "'");
    }();
    if (scale != 1.0) seq = seq.scaled_by(scale);
    if (normalize) seq = seq.scaled_by(normalized_scale(seq, *normalize));
    return seq;
  }

  void add_flags(CLI::App* app) {
    app->add_option("--family", family, "sequence family")->required();
    app->add_option("--s", s, "iterated-log depth (log_power)");
    app->add_option("--eps", eps, "epsilon exponent (power_law / log_power)");
    app->add_option("--ratio", ratio, "geometric ratio");
    app->add_option("--scale", scale, "constant multiplier");
    app->add_option("--normalize", normalize,
                    "scale so the certified total stays below this target");
  }
};

std::string seq_params(const SeqFlags& f) {
  std::string p = "family=" + f.family;
  if (f.family == "log_power") p += ";s=" + std::to_string(f.s);
  if (f.family == "log_power" || f.family == "power_law")
    p += ";eps=" + std::to_string(f.eps);
  if (f.family == "geometric") p += ";ratio=" + std::to_string(f.ratio);
  if (f.scale != 1.0) p += ";scale=" + std::to_string(f.scale);
  if (f.normalize) p += ";normalize=" + std::to_string(*f.normalize);
  return p;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"runtime experiments for (1+1) evolutionary algorithms with "
               "unknown solution length"};
  app.require_subcommand(1);

  // run
  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "execute one experiment config");
  run->add_option("--config", run_opt.config_path, "JSON experiment config")->required();
  run->add_option("--out", run_opt.out_path, "raw results file")->required();
  run->add_option("--seed", run_opt.seed, "master seed override");
  run->add_option("--threads", run_opt.threads, "worker thread override");
  run->add_option("--format", run_opt.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // sweep
  SweepOptions sweep_opt;
  CLI::App* sweep = app.add_subcommand("sweep", "execute every config of a preset");
  sweep->add_option("--preset", sweep_opt.preset, "preset name")->required();
  sweep->add_option("--out-dir", sweep_opt.out_dir, "output directory")->required();
  sweep->add_option("--seed", sweep_opt.seed, "master seed override");
  sweep->add_option("--threads", sweep_opt.threads, "worker thread override");
  sweep->add_option("--format", sweep_opt.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // presets
  std::string preset_name;
  CLI::App* presets = app.add_subcommand("presets", "list presets or dump one as JSON");
  presets->add_option("--name", preset_name, "dump this preset's configs");

  // validate
  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "check a config and report diagnostics");
  validate->add_option("--config", validate_path, "JSON experiment config")->required();

  // analytic
  CLI::App* analytic = app.add_subcommand(
      "analytic", "print formula values as CSV (formula,params,value,kind,validity)");
  analytic->require_subcommand(1);

  struct {
    std::uint32_t n = 1;
    double p = 0.1;
  } np;
  CLI::App* lo_exact = analytic->add_subcommand("lo-exact", "exact LeadingOnes expectation");
  lo_exact->add_option("--n", np.n)->required();
  lo_exact->add_option("--p", np.p)->required();

  struct {
    std::vector<double> rates;
    SeqFlags seq;
    std::uint32_t n = 0;
    bool use_seq = false;
  } vec;
  CLI::App* lo_vec =
      analytic->add_subcommand("lo-exact-vector", "exact LeadingOnes expectation, rate vector");
  lo_vec->add_option("--rates", vec.rates, "explicit rates p_1..p_n");
  CLI::App* lo_vec_seq = lo_vec->add_subcommand("from-sequence", "rates from a sequence family");
  vec.seq.add_flags(lo_vec_seq);
  lo_vec_seq->add_option("--n", vec.n, "vector length")->required();

  CLI::App* om_up = analytic->add_subcommand("om-upper", "OneMax upper bound");
  om_up->add_option("--n", np.n)->required();
  om_up->add_option("--p", np.p)->required();

  CLI::App* om_lo = analytic->add_subcommand("om-lower", "OneMax lower bound");
  om_lo->add_option("--n", np.n)->required();
  om_lo->add_option("--p", np.p)->required();

  struct {
    std::string dist = "trunc_geo";
    std::uint32_t n_max = 64;
    double q = 0.125;
    std::string formula = "lo-exact";
    std::optional<double> p;
    std::string p_rule;
  } mix;
  CLI::App* mixture = analytic->add_subcommand("mixture", "length-distribution mixture");
  mixture->add_option("--dist", mix.dist)->check(CLI::IsMember({"trunc_geo", "geo"}));
  mixture->add_option("--n-max", mix.n_max, "truncation bound N");
  mixture->add_option("--q", mix.q)->required();
  mixture->add_option("--formula", mix.formula)
      ->check(CLI::IsMember({"lo-exact", "om-upper", "om-lower"}));
  mixture->add_option("--p", mix.p, "literal per-length rate");
  mixture->add_option("--p-rule", mix.p_rule, "q or q_over_2")
      ->check(CLI::IsMember({"q", "q_over_2"}));

  struct {
    SeqFlags seq;
    std::uint32_t n = 0;
  } reform;
  CLI::App* reform_cmd =
      analytic->add_subcommand("reform", "upper bounds for a summable rate vector");
  reform.seq.add_flags(reform_cmd);
  reform_cmd->add_option("--n", reform.n)->required();

  struct {
    double p = 0.25;
    std::uint32_t from = 1, to = 1, delta = 1;
  } growth;
  CLI::App* growth_cmd =
      analytic->add_subcommand("growth", "LeadingOnes growth ratios T(n+delta)/T(n)");
  growth_cmd->add_option("--p", growth.p)->required();
  growth_cmd->add_option("--n-from", growth.from)->required();
  growth_cmd->add_option("--n-to", growth.to)->required();
  growth_cmd->add_option("--delta", growth.delta);

  struct {
    SeqFlags seq;
    std::optional<std::uint64_t> term_i, sum_k, tail_k;
  } seq_cmd_opt;
  CLI::App* seq_cmd = analytic->add_subcommand("seq", "sequence terms, sums and tail bounds");
  seq_cmd_opt.seq.add_flags(seq_cmd);
  seq_cmd->add_option("--term", seq_cmd_opt.term_i, "print term i");
  seq_cmd->add_option("--sum", seq_cmd_opt.sum_k, "print partial sum to k");
  seq_cmd->add_option("--tail", seq_cmd_opt.tail_k, "print tail bound from k");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e);  // --help
      return kOk;
    }
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run) return cmd_run(run_opt);
    if (*sweep) return cmd_sweep(sweep_opt);
    if (*presets) return cmd_presets(preset_name);
    if (*validate) return cmd_validate(validate_path);

    // analytic subcommands print the CSV header first
    std::cout << "formula,params,value,kind,validity\n";
    if (*lo_exact) {
      print_analytic_row("lo_exact_uniform",
                         "n=" + std::to_string(np.n) + ";p=" + std::to_string(np.p),
                         lo_exact_uniform(np.n, np.p));
      return kOk;
    }
    if (*lo_vec) {
      std::vector<double> rates = vec.rates;
      std::string params;
      if (*lo_vec_seq) {
        const SequenceFamily seq = vec.seq.build();
        rates.clear();
        for (std::uint32_t i = 1; i <= vec.n; ++i) rates.push_back(term(seq, i));
        params = seq_params(vec.seq) + ";n=" + std::to_string(vec.n);
      } else {
        if (rates.empty())
          throw std::invalid_argument("lo-exact-vector needs --rates or from-sequence");
        params = "rates=" + std::to_string(rates.size()) + " entries";
      }
      print_analytic_row("lo_exact_vector", params, lo_exact_vector(rates));
      return kOk;
    }
    if (*om_up) {
      print_analytic_row("om_upper_uniform",
                         "n=" + std::to_string(np.n) + ";p=" + std::to_string(np.p),
                         om_upper_uniform(np.n, np.p));
      return kOk;
    }
    if (*om_lo) {
      print_analytic_row("om_lower_uniform",
                         "n=" + std::to_string(np.n) + ";p=" + std::to_string(np.p),
                         om_lower_uniform(np.n, np.p));
      return kOk;
    }
    if (*mixture) {
      const LengthDistribution dist =
          mix.dist == "geo" ? LengthDistribution::geometric(mix.q)
                            : LengthDistribution::truncated_geometric(mix.n_max, mix.q);
      double p = 0.0;
      if (mix.p)
        p = *mix.p;
      else if (mix.p_rule == "q")
        p = mix.q;
      else if (mix.p_rule == "q_over_2")
        p = mix.q / 2.0;
      else
        throw std::invalid_argument("mixture needs --p or --p-rule");
      auto per_n = [&](std::uint32_t n) {
        if (mix.formula == "lo-exact") return lo_exact_uniform(n, p);
        if (mix.formula == "om-upper") return om_upper_uniform(n, p);
        return om_lower_uniform(n, p);
      };
      const std::string params = "dist=" + mix.dist + ";q=" + std::to_string(mix.q) +
                                 (mix.dist == "geo" ? "" : ";N=" + std::to_string(mix.n_max)) +
                                 ";per_n=" + mix.formula + ";p=" + std::to_string(p);
      print_analytic_row("mixture_expectation", params, mixture_expectation(dist, per_n));
      return kOk;
    }
    if (*reform_cmd) {
      const ReformBounds bounds = reform_upper_bounds(reform.seq.build(), reform.n);
      const std::string params = seq_params(reform.seq) + ";n=" + std::to_string(reform.n);
      print_analytic_row("reform_upper_om", params, bounds.one_max);
      print_analytic_row("reform_upper_lo", params, bounds.leading_ones);
      return kOk;
    }
    if (*growth_cmd) {
      const auto ratios =
          exponential_growth_ratios(growth.p, growth.from, growth.to, growth.delta);
      for (std::size_t i = 0; i < ratios.size(); ++i) {
        const std::uint32_t n = growth.from + static_cast<std::uint32_t>(i);
        print_analytic_row(
            "growth_ratio",
            "p=" + std::to_string(growth.p) + ";n=" + std::to_string(n) + ";delta=" +
                std::to_string(growth.delta),
            {ratios[i], BoundKind::exact, "ratio of exact values"});
      }
      return kOk;
    }
    if (*seq_cmd) {
      const SequenceFamily seq = seq_cmd_opt.seq.build();
      const std::string params = seq_params(seq_cmd_opt.seq);
      if (seq_cmd_opt.term_i)
        print_analytic_row("seq_term", params + ";i=" + std::to_string(*seq_cmd_opt.term_i),
                           {term(seq, *seq_cmd_opt.term_i), BoundKind::exact, "term value"});
      if (seq_cmd_opt.sum_k)
        print_analytic_row("seq_partial_sum",
                           params + ";k=" + std::to_string(*seq_cmd_opt.sum_k),
                           {partial_sum(seq, *seq_cmd_opt.sum_k), BoundKind::exact,
                            "compensated partial sum"});
      if (seq_cmd_opt.tail_k)
        print_analytic_row("seq_tail_bound",
                           params + ";k=" + std::to_string(*seq_cmd_opt.tail_k),
                           {tail_bound(seq, *seq_cmd_opt.tail_k), BoundKind::upper_bound,
                            "integral comparison"});
      return kOk;
    }
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace ealab::cli
