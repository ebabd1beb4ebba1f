#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ovlab/experiments/config.hpp"

namespace ovlab {

/// Output directory of one command; collects the file inventory and writes
/// manifest.json last.
class RunDirectory {
public:
  /// Creates `dir`. Refuses a non-empty directory so the inventory stays complete.
  RunDirectory(std::filesystem::path dir, const RunConfig& cfg);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path(const std::string& relative) const { return root_ / relative; }

  /// Registers a written file (path relative to the root) with optional metadata.
  void addFile(const std::string& relative, nlohmann::json meta = nlohmann::json::object());

  /// Checksums every registered file and writes the manifest atomically.
  void finish(int exitStatus, const nlohmann::json& extra = nlohmann::json::object());

private:
  std::filesystem::path root_;
  nlohmann::json config_;
  std::string configText_;
  std::string experiment_;
  std::string started_;
  std::vector<std::pair<std::string, nlohmann::json>> files_;
};

std::string utcNow();

} // namespace ovlab
