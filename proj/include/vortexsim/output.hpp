#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "vortexsim/detection.hpp"
#include "vortexsim/dynamics.hpp"

namespace vortexsim::output {

struct RunMeta {
  std::string experiment;
  std::string config_hash;
  std::string version;
};

std::string trajectory_csv(const dyn::Trajectory& traj, const RunMeta& meta);
nlohmann::json trajectory_json(const dyn::Trajectory& traj, const RunMeta& meta);

std::string sweep_csv(const std::vector<dyn::SweepPoint>& points, const RunMeta& meta);
nlohmann::json sweep_json(const std::vector<dyn::SweepPoint>& points, const RunMeta& meta);

std::string grid_csv(const detect::DensityGrid& grid, const RunMeta& meta);
nlohmann::json grid_json(const detect::DensityGrid& grid, const RunMeta& meta);

// Serialize any report with the standard meta block attached.
nlohmann::json with_meta(nlohmann::json body, const RunMeta& meta);

void write_text(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const nlohmann::json& body);

}  // namespace vortexsim::output
