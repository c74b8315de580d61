#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "vortexsim/config.hpp"

namespace vortexsim::runner {

struct RunOptions {
  std::filesystem::path output_dir = ".";
  std::optional<double> tolerance;  // relative tolerance override
  std::optional<int> samples;
  std::optional<std::string> format;  // "csv" or "json"; default writes both
};

// Executes the configured experiment, writes its artifacts atomically and
// prints a one-line summary. Throws ConfigError / AccuracyError /
// StiffnessError for the caller to map onto exit codes.
void run(const config::ParsedConfig& cfg, const RunOptions& opts);

}  // namespace vortexsim::runner
