#include "run_directory.hpp"

#include <ctime>

#include "ovlab/experiments/io.hpp"

#ifndef OVLAB_VERSION
#define OVLAB_VERSION "unknown"
#endif

namespace ovlab {

namespace fs = std::filesystem;

std::string utcNow() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunDirectory::RunDirectory(fs::path dir, const RunConfig& cfg)
    : root_(std::move(dir)), config_(cfg.toJson()), configText_(cfg.source),
      experiment_(toString(cfg.experiment)), started_(utcNow()) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw IoError("cannot create output directory " + root_.string() + ": " + ec.message());
  if (!fs::is_directory(root_)) throw IoError(root_.string() + " is not a directory");
  if (!fs::is_empty(root_, ec) || ec) throw IoError("output directory " + root_.string() + " is not empty");
}

void RunDirectory::addFile(const std::string& relative, nlohmann::json meta) {
  files_.emplace_back(relative, std::move(meta));
}

void RunDirectory::finish(int exitStatus, const nlohmann::json& extra) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [rel, meta] : files_) {
    const fs::path p = root_ / rel;
    nlohmann::json entry = meta;
    entry["path"] = rel;
    entry["sha256"] = sha256File(p);
    entry["bytes"] = fs::file_size(p);
    files.push_back(std::move(entry));
  }
  nlohmann::json m;
  m["format"] = "ovlab-manifest-1";
  m["code_version"] = OVLAB_VERSION;
  m["experiment"] = experiment_;
  m["config"] = config_;
  m["config_toml"] = configText_;
  m["started_utc"] = started_;
  m["finished_utc"] = utcNow();
  m["exit_status"] = exitStatus;
  for (const auto& [k, v] : extra.items()) m[k] = v;
  m["files"] = std::move(files);
  writeFileAtomic(root_ / "manifest.json", m.dump(2) + "\n");
}

} // namespace ovlab
