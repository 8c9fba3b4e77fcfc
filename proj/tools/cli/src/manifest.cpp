#include "manifest.hpp"

#include "rsda/cli.hpp"
#include "rsda/errors.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

namespace rsda::cli {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  nlohmann::json j{{"command", manifest.command},
                   {"args", manifest.args},
                   {"flags", manifest.flags},
                   {"seeds", manifest.seeds},
                   {"tool_version", std::string(tool_version)},
                   {"outputs", manifest.outputs},
                   {"timestamp", utc_timestamp()},
                   {"wall_clock_seconds", manifest.wall_clock_seconds}};
  if (!manifest.extra.empty()) {
    j["extra"] = manifest.extra;
  }
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".manifest.json");
}

}  // namespace rsda::cli
