#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace rsda::cli {

/// Everything needed to rerun a command: the argument vector, every
/// effective flag value (defaults included) and the seeds used.
struct Manifest {
  std::string command;
  std::vector<std::string> args;
  nlohmann::json flags = nlohmann::json::object();
  nlohmann::json seeds = nlohmann::json::object();
  nlohmann::json extra = nlohmann::json::object();
  std::vector<std::string> outputs;
  double wall_clock_seconds = 0.0;
};

/// Adds the tool version and a UTC timestamp.
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

/// path + ".manifest.json"
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

}  // namespace rsda::cli
