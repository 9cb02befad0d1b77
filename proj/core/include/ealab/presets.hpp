#pragma once

#include <string>
#include <vector>

#include "ealab/harness.hpp"

namespace ealab {

/// Fully specified desk-scale experiment configs for a named preset.
/// Throws std::invalid_argument for unknown names.
std::vector<ExperimentConfig> preset_suite(const std::string& name);

/// All preset names with a one-line description each.
std::vector<std::pair<std::string, std::string>> preset_catalog();

}  // namespace ealab
