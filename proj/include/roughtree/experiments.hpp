#pragma once

#include "roughtree/io.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace roughtree {

inline constexpr const char* kVersion = "1.0.0";

/// Bad key, unparsable value or a value outside the module caps.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Subcommand plus validated key=value settings. Keys use underscores;
/// "max-weight" and "max_weight" name the same setting.
struct ExperimentConfig {
  std::string command;
  std::map<std::string, std::string> settings;

  std::uint64_t seed() const;
  std::string out() const;

  std::optional<double> real(const std::string& key) const;
  std::optional<long long> integer(const std::string& key) const;
  std::optional<std::vector<std::size_t>> sizes(const std::string& key) const;
  std::optional<std::string> text(const std::string& key) const;

  double real_or(const std::string& key, double fallback) const { return real(key).value_or(fallback); }
  long long integer_or(const std::string& key, long long fallback) const { return integer(key).value_or(fallback); }
};

const std::vector<std::string>& experiment_names();
const std::vector<std::string>& setting_keys();

/// Validates and stores one setting; throws ConfigError.
void apply_setting(ExperimentConfig& config, std::string key, const std::string& value);
/// key = value lines; '#' starts a comment.
void apply_config_text(ExperimentConfig& config, const std::string& text);
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& file);

/// "command=<name>" followed by the sorted settings (out excluded), one per line.
std::string canonical_config(const ExperimentConfig& config);
/// FNV-1a 64 of the canonical text, 16 hex digits.
std::string config_hash(const ExperimentConfig& config);
Json manifest(const ExperimentConfig& config);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
};

struct ExperimentResult {
  bool passed = true;
  std::vector<CheckResult> checks;
  Json report;  // manifest, parameters, checks, data
  std::vector<CsvTable> tables;
};

/// Runs one subcommand. Throws ConfigError for an unknown command; module
/// argument errors propagate as std::invalid_argument / std::domain_error.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes <out>/<command>.json and one <out>/<table>.csv per table.
void write_outputs(const std::filesystem::path& out, const ExperimentConfig& config, const ExperimentResult& result);

/// One line per check, then "PASSED" or "FAILED".
std::string summary_text(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace roughtree
