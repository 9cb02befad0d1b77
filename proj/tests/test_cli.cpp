#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "ealab/io.hpp"
#include "ealab/presets.hpp"

namespace fs = std::filesystem;
using namespace ealab;

namespace {

struct CaptureStreams {
  std::ostringstream out, err;
  std::streambuf* old_out;
  std::streambuf* old_err;
  CaptureStreams()
      : old_out(std::cout.rdbuf(out.rdbuf())), old_err(std::cerr.rdbuf(err.rdbuf())) {}
  ~CaptureStreams() {
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
  }
};

int run_cli(std::initializer_list<const char*> args, std::string* out = nullptr,
            std::string* err = nullptr) {
  std::vector<const char*> argv{"ealab"};
  argv.insert(argv.end(), args.begin(), args.end());
  CaptureStreams capture;
  const int code = cli::dispatch(static_cast<int>(argv.size()), argv.data());
  if (out) *out = capture.out.str();
  if (err) *err = capture.err.str();
  return code;
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "ealab-cli-tests";
  fs::create_directories(dir);
  return dir;
}

std::string small_config_json() {
  ExperimentConfig cfg;
  cfg.id = "cli-smoke";
  cfg.function.family = FitnessFamily::leading_ones;
  cfg.scheme.kind = SchemeKind::uniform;
  cfg.scheme.rate = {RateRuleKind::one_over_n, 0.0};
  cfg.cells = {{"n=10", 10u, 2000}};
  cfg.budget = 100000;
  cfg.master_seed = 42;
  return config_to_json(cfg);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("run subcommand writes schema-conforming outputs") {
  const fs::path dir = temp_dir();
  const fs::path cfg_path = dir / "smoke.json";
  const fs::path out_path = dir / "r.csv";
  std::ofstream(cfg_path) << small_config_json();

  std::string out;
  const int code = run_cli({"run", "--config", cfg_path.c_str(), "--out",
                            out_path.c_str(), "--seed", "42"},
                           &out);
  CHECK(code == 0);
  CHECK(out.find("experiment cli-smoke") != std::string::npos);

  const std::string raw = read_file(out_path);
  CHECK(raw.starts_with(
      "experiment_id,cell_key,trial_index,seed,realized_length,evaluations,hit_budget\n"));
  CHECK(raw.find("cli-smoke,n=10,0,") != std::string::npos);

  const std::string summary = read_file(dir / "r.summary.csv");
  CHECK(summary.starts_with(
      "experiment_id,cell_key,trials,censored,mean,sd,se,ci_lo,ci_hi\n"));

  // rerunning with the same seed yields identical bytes
  const fs::path out2 = dir / "r2.csv";
  run_cli({"run", "--config", cfg_path.c_str(), "--out", out2.c_str(), "--seed", "42",
           "--threads", "3"});
  CHECK(read_file(out_path) == read_file(out2));

  // JSON mirror
  const fs::path out_json = dir / "r.json";
  CHECK(run_cli({"run", "--config", cfg_path.c_str(), "--out", out_json.c_str(),
                 "--format", "json"}) == 0);
  CHECK(read_file(out_json).find("\"records\"") != std::string::npos);
  CHECK(read_file(dir / "r.summary.json").find("\"metadata\"") != std::string::npos);
}

TEST_CASE("run without a config is a usage error") {
  std::string err;
  CHECK(run_cli({"run"}, nullptr, &err) == 1);
  CHECK(run_cli({}, nullptr, &err) == 1);
  CHECK(run_cli({"definitely-not-a-subcommand"}, nullptr, &err) == 1);
}

TEST_CASE("missing files and unwritable outputs map to the exit-code contract") {
  const fs::path dir = temp_dir();
  std::string err;
  CHECK(run_cli({"run", "--config", "/nonexistent/x.json", "--out", "/tmp/x.csv"},
                nullptr, &err) == 1);
  CHECK(err.find("cannot read") != std::string::npos);

  const fs::path cfg_path = dir / "smoke2.json";
  std::ofstream(cfg_path) << small_config_json();
  CHECK(run_cli({"run", "--config", cfg_path.c_str(), "--out",
                 "/nonexistent-dir/deep/r.csv"}) == 2);
}

TEST_CASE("validate reports errors with the offending key") {
  const fs::path dir = temp_dir();

  const fs::path good = dir / "good.json";
  std::ofstream(good) << small_config_json();
  std::string out, err;
  CHECK(run_cli({"validate", "--config", good.c_str()}, &out, &err) == 0);
  CHECK(out.find("ok:") != std::string::npos);

  const fs::path bad = dir / "bad.json";
  std::ofstream(bad) << R"({
    "id": "bad",
    "function": {"family": "leading_ones"},
    "scheme": {"kind": "vector", "source": {"kind": "literal", "rates": [0.5, 1.5]}},
    "length": {"kind": "fixed", "n": 2},
    "trials": 1000,
    "budget": 1000,
    "master_seed": 1
  })";
  CHECK(run_cli({"validate", "--config", bad.c_str()}, &out, &err) == 1);
  CHECK(err.find("scheme.rates[1]") != std::string::npos);

  const fs::path malformed = dir / "malformed.json";
  std::ofstream(malformed) << "{ not json";
  CHECK(run_cli({"validate", "--config", malformed.c_str()}, &out, &err) == 1);
  CHECK(err.find("parse error") != std::string::npos);

  // regime departures warn but do not fail
  const fs::path regime = dir / "regime.json";
  std::ofstream(regime) << R"({
    "id": "regime",
    "function": {"family": "leading_ones"},
    "scheme": {"kind": "uniform", "rate": {"kind": "q_over_2"}},
    "length": {"kind": "dist", "dist": {"kind": "trunc_geo", "n_max": 16, "q": 0.9}},
    "trials": 1000,
    "budget": 1000,
    "master_seed": 1
  })";
  CHECK(run_cli({"validate", "--config", regime.c_str()}, &out, &err) == 0);
  CHECK(err.find("warning") != std::string::npos);
  CHECK(err.find("regime") != std::string::npos);
}

TEST_CASE("analytic subcommands print CSV rows") {
  std::string out;
  CHECK(run_cli({"analytic", "lo-exact", "--n", "10", "--p", "0.1"}, &out) == 0);
  CHECK(out.starts_with("formula,params,value,kind,validity\n"));
  CHECK(out.find("84.0587") != std::string::npos);

  CHECK(run_cli({"analytic", "lo-exact-vector", "--rates", "0.5", "--rates", "0.25"},
                &out) == 0);
  CHECK(out.find(",5,exact,") != std::string::npos);

  CHECK(run_cli({"analytic", "om-upper", "--n", "1", "--p", "0.5"}, &out) == 0);
  CHECK(out.find(",4,") != std::string::npos);

  CHECK(run_cli({"analytic", "growth", "--p", "0.25", "--n-from", "40", "--n-to", "41"},
                &out) == 0);
  CHECK(out.find("1.333") != std::string::npos);

  CHECK(run_cli({"analytic", "reform", "--family", "geometric", "--ratio", "0.5",
                 "--scale", "0.5", "--n", "4"},
                &out) == 0);
  CHECK(out.find("reform_upper_om") != std::string::npos);
  CHECK(out.find("128") != std::string::npos);
  CHECK(out.find("256") != std::string::npos);

  // regime errors are config errors, not crashes
  std::string err;
  CHECK(run_cli({"analytic", "lo-exact", "--n", "10", "--p", "0.7"}, nullptr, &err) == 1);
  CHECK(err.find("0 < p < 1/2") != std::string::npos);
}

TEST_CASE("presets list, dump and reject unknown names") {
  std::string out, err;
  CHECK(run_cli({"presets"}, &out) == 0);
  CHECK(out.find("lo-exact-grid") != std::string::npos);
  CHECK(out.find("crossover-pkl") != std::string::npos);

  CHECK(run_cli({"presets", "--name", "table2-q-half-LO"}, &out) == 0);
  CHECK(out.find("\"q_over_2\"") != std::string::npos);
  CHECK(out.find("1280") != std::string::npos);  // the N = 10/q sweep reaches 1280

  CHECK(run_cli({"presets", "--name", "unknown"}, &out, &err) == 1);
  CHECK(err.find("unknown preset") != std::string::npos);

  CHECK(run_cli({"sweep", "--preset", "unknown", "--out-dir", "/tmp/x"}, &out, &err) == 1);
}

TEST_CASE("sweep executes a preset into an output directory") {
  const fs::path dir = temp_dir() / "sweep-out";
  fs::remove_all(dir);
  std::string out;
  CHECK(run_cli({"sweep", "--preset", "om-sandwich", "--out-dir", dir.c_str()}, &out) == 0);
  CHECK(fs::exists(dir / "om-sandwich.csv"));
  CHECK(fs::exists(dir / "om-sandwich.summary.csv"));
}
