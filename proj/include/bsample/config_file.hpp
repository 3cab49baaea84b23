#pragma once

// Experiment files: `key = value` lines, optional `[defaults]` section, one `[name]` section per
// experiment. Lines starting with '#' or ';' are comments. Settings before the first section
// count as defaults.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "bsample/harness.hpp"

namespace bsample {

struct ConfigSection {
  std::string name;
  std::size_t line = 0;
  std::vector<std::pair<std::string, std::string>> entries;
};

struct ConfigFile {
  std::vector<std::pair<std::string, std::string>> defaults;
  std::vector<ConfigSection> experiments;
};

// Throws ConfigError with the offending line number on malformed input or duplicate keys.
ConfigFile parse_config(std::istream& is);

// Sets one field by name (model, beta, n, c, method, alpha, reps, seed, truncation, tail_tol,
// paired, workers, mean_mc_draws, out). Throws ConfigError on unknown keys or bad values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// base + defaults + each section, in file order. A file without sections yields one config.
std::vector<ExperimentConfig> experiments_from(const ConfigFile& file, const ExperimentConfig& base);

}  // namespace bsample
