#ifndef HICOMM_TOOLS_CACHE_HPP
#define HICOMM_TOOLS_CACHE_HPP

#include <filesystem>
#include <optional>
#include <string>

namespace hicomm::cli {

struct CachedRun {
  int exit_code = 0;
  std::string output;
};

// Results on disk, one JSON file per key. The key must already contain
// everything that influences the output, caps included.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::optional<CachedRun> lookup(const std::string& key) const;
  void store(const std::string& key, const CachedRun& run) const;
  std::filesystem::path path_for(const std::string& key) const;

 private:
  std::filesystem::path dir_;
};

std::string fnv1a_hex(const std::string& s);

}  // namespace hicomm::cli

#endif
