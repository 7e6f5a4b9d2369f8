#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace dust::cli {

using Json = nlohmann::ordered_json;

std::string sha256_hex(std::string_view bytes);

/// One record per run: command, resolved configuration, seed, version,
/// wall-clock time and the digest of every file written.
class RunManifest {
 public:
  RunManifest(std::string command, Json config, std::uint64_t seed);

  /// Writes `text` to `path` and records its digest.
  void write_output(const std::string& path, std::string_view text);

  /// Re-reads every recorded output and compares digests.
  bool verify_outputs(std::string& problem) const;

  void set_status(std::string status, std::string message = {});

  const std::vector<std::string>& output_paths() const noexcept { return paths_; }

  Json to_json() const;

 private:
  std::string command_;
  Json config_;
  std::uint64_t seed_;
  std::chrono::steady_clock::time_point start_;
  std::string started_utc_;
  std::vector<std::string> paths_;
  std::vector<std::string> digests_;
  std::vector<std::size_t> sizes_;
  std::string status_ = "ok";
  std::string message_;
};

}  // namespace dust::cli
