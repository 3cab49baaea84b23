#include "bsample/config_file.hpp"

#include <charconv>
#include <limits>
#include <istream>
#include <set>

#include <fmt/format.h>

#include "bsample/error.hpp"

namespace bsample {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(fmt::format("invalid value '{}' for {}", value, key));
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(fmt::format("invalid boolean '{}' for {}", value, key));
}

}  // namespace

ConfigFile parse_config(std::istream& is) {
  ConfigFile file;
  std::string raw;
  std::size_t lineno = 0;
  std::vector<std::pair<std::string, std::string>>* target = &file.defaults;
  std::set<std::string> seen_keys;
  std::set<std::string> seen_sections;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(fmt::format("line {}: unterminated section header", lineno));
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError(fmt::format("line {}: empty section name", lineno));
      if (!seen_sections.insert(name).second) {
        throw ConfigError(fmt::format("line {}: duplicate section [{}]", lineno, name));
      }
      seen_keys.clear();
      if (name == "defaults") {
        target = &file.defaults;
        for (const auto& [k, v] : file.defaults) seen_keys.insert(k);
      } else {
        file.experiments.push_back({name, lineno, {}});
        target = &file.experiments.back().entries;
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected key = value", lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("line {}: missing key", lineno));
    if (!seen_keys.insert(key).second) throw ConfigError(fmt::format("line {}: duplicate key '{}'", lineno, key));
    target->emplace_back(key, value);
  }
  return file;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "model") cfg.model = value;
  else if (key == "beta") cfg.beta = parse_number<double>(key, value);
  else if (key == "n") cfg.n = parse_number<std::size_t>(key, value);
  else if (key == "c") cfg.c = parse_number<double>(key, value);
  else if (key == "method") cfg.method = method_from_string(value);
  else if (key == "alpha") cfg.alpha = parse_number<double>(key, value);
  else if (key == "reps") cfg.reps = parse_number<std::size_t>(key, value);
  else if (key == "seed") cfg.master_seed = parse_number<std::uint64_t>(key, value);
  else if (key == "truncation") cfg.truncation = parse_number<std::size_t>(key, value);
  else if (key == "tail_tol") cfg.tail_tol = value == "inf" ? std::numeric_limits<double>::infinity() : parse_number<double>(key, value);
  else if (key == "paired") cfg.paired = parse_bool(key, value);
  else if (key == "workers") cfg.workers = parse_number<unsigned>(key, value);
  else if (key == "mean_mc_draws") cfg.mean_mc_draws = parse_number<std::size_t>(key, value);
  else if (key == "out") cfg.output = value;
  else throw ConfigError(fmt::format("unknown setting '{}'", key));
}

std::vector<ExperimentConfig> experiments_from(const ConfigFile& file, const ExperimentConfig& base) {
  ExperimentConfig defaults = base;
  for (const auto& [k, v] : file.defaults) apply_setting(defaults, k, v);
  if (file.experiments.empty()) return {defaults};
  std::vector<ExperimentConfig> out;
  for (const auto& section : file.experiments) {
    ExperimentConfig cfg = defaults;
    try {
      for (const auto& [k, v] : section.entries) apply_setting(cfg, k, v);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("[{}] (line {}): {}", section.name, section.line, e.what()));
    }
    out.push_back(std::move(cfg));
  }
  return out;
}

}  // namespace bsample
