#include "manifest.hpp"

#include <openssl/evp.h>

#include <ctime>
#include <stdexcept>

#include "dust/io.hpp"
#include "dust/version.hpp"

namespace dust::cli {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

RunManifest::RunManifest(std::string command, Json config, std::uint64_t seed)
    : command_(std::move(command)),
      config_(std::move(config)),
      seed_(seed),
      start_(std::chrono::steady_clock::now()) {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  started_utc_ = buf;
}

void RunManifest::write_output(const std::string& path, std::string_view text) {
  write_text_file(path, text);
  paths_.push_back(path);
  digests_.push_back(sha256_hex(text));
  sizes_.push_back(text.size());
}

bool RunManifest::verify_outputs(std::string& problem) const {
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    if (sha256_hex(read_text_file(paths_[i])) != digests_[i]) {
      problem = "digest mismatch for " + paths_[i];
      return false;
    }
  }
  return true;
}

void RunManifest::set_status(std::string status, std::string message) {
  status_ = std::move(status);
  message_ = std::move(message);
}

Json RunManifest::to_json() const {
  Json j;
  j["command"] = command_;
  j["version"] = kVersion;
  j["seed"] = seed_;
  j["config"] = config_;
  j["started_utc"] = started_utc_;
  j["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  Json outputs = Json::array();
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    outputs.push_back({{"path", paths_[i]}, {"sha256", digests_[i]}, {"bytes", sizes_[i]}});
  }
  j["outputs"] = outputs;
  j["status"] = status_;
  if (!message_.empty()) j["message"] = message_;
  return j;
}

}  // namespace dust::cli
