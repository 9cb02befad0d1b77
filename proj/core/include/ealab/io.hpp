#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ealab/harness.hpp"

namespace ealab {

struct Diagnostic {
  enum class Severity { error, warning };
  Severity severity;
  std::string path;  // JSON pointer-ish location, e.g. "scheme.rates[2]"
  std::string message;
};

struct ConfigLoad {
  std::optional<ExperimentConfig> config;
  std::vector<Diagnostic> diagnostics;
  bool ok() const noexcept {
    for (const auto& d : diagnostics)
      if (d.severity == Diagnostic::Severity::error) return false;
    return config.has_value();
  }
};

/// Parse and semantically validate a config document.
ConfigLoad parse_config(const std::string& json_text);
ConfigLoad load_config_file(const std::string& path);

/// Semantic checks on an already-built config (also run by the parsers).
std::vector<Diagnostic> validate_config(const ExperimentConfig& cfg);

/// Canonical JSON form of a config (round-trips through parse_config).
std::string config_to_json(const ExperimentConfig& cfg);

/// Raw results, one row per trial:
/// experiment_id,cell_key,trial_index,seed,realized_length,evaluations,hit_budget
std::string raw_csv(const ExperimentResult& result);
/// Summary, one row per cell:
/// experiment_id,cell_key,trials,censored,mean,sd,se,ci_lo,ci_hi
std::string summary_csv(const ExperimentResult& result);
/// JSON mirrors with identical field names (plus a metadata object).
std::string raw_json(const ExperimentResult& result);
std::string summary_json(const ExperimentResult& result);

/// Write atomically: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace ealab
