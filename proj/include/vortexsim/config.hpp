#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace vortexsim::config {

enum class ExperimentKind {
  mz_prepare,
  chirp,
  stirap,
  overlap_sweep,
  mexican_hat,
  detect,
  validate_integrals,
  five_level_check,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);

// "132 Hz", "5 nm", "86.909 u", ... -> SI value. Frequencies are angular
// (rad/s); the Hz family mirrors the conventions of the bundled experiments.
double parse_quantity(const std::string& text, const std::string& field_path);

struct ParsedConfig {
  ExperimentKind kind;
  nlohmann::json raw;
  std::string hash;  // 16 hex digits over the canonical dump
};

ParsedConfig load_config(const std::filesystem::path& path);
ParsedConfig parse_config(const std::string& text);

// Field access with config-path diagnostics. All getters throw ConfigError
// naming the offending path.
class Fields {
 public:
  explicit Fields(const nlohmann::json& root) : root_(&root) {}

  bool has(const std::string& path) const;
  double number(const std::string& path) const;
  double number_or(const std::string& path, double fallback) const;
  int integer(const std::string& path) const;
  int integer_or(const std::string& path, int fallback) const;
  bool boolean_or(const std::string& path, bool fallback) const;
  std::string str(const std::string& path) const;
  std::string str_or(const std::string& path, const std::string& fallback) const;
  double quantity(const std::string& path) const;        // unit-suffixed string
  double quantity_or(const std::string& path, double fallback) const;
  std::vector<double> number_list(const std::string& path) const;

 private:
  const nlohmann::json* find(const std::string& path) const;
  const nlohmann::json& require(const std::string& path) const;
  const nlohmann::json* root_;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool clean() const { return errors.empty() && warnings.empty(); }
};

// Schema and physics sanity checks; never runs the experiment.
ValidationReport validate(const ParsedConfig& cfg);

}  // namespace vortexsim::config
