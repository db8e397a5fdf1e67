#include "cache.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hicomm::cli {

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::filesystem::path ResultCache::path_for(const std::string& key) const { return dir_ / (fnv1a_hex(key) + ".json"); }

std::optional<CachedRun> ResultCache::lookup(const std::string& key) const {
  std::ifstream in(path_for(key));
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  auto j = nlohmann::json::parse(ss.str(), nullptr, false);
  // Anything unexpected counts as a miss and gets overwritten.
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  if (!j.contains("key") || !j["key"].is_string() || j["key"].get<std::string>() != key) return std::nullopt;
  if (!j.contains("exit") || !j["exit"].is_number_integer()) return std::nullopt;
  if (!j.contains("output") || !j["output"].is_string()) return std::nullopt;
  return CachedRun{j["exit"].get<int>(), j["output"].get<std::string>()};
}

void ResultCache::store(const std::string& key, const CachedRun& run) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  nlohmann::json j{{"key", key}, {"exit", run.exit_code}, {"output", run.output}};
  auto target = path_for(key);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) return;
    out << j.dump();
  }
  std::filesystem::rename(tmp, target, ec);
}

}  // namespace hicomm::cli
