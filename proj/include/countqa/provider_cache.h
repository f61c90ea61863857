#ifndef COUNTQA_PROVIDER_CACHE_H_
#define COUNTQA_PROVIDER_CACHE_H_

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>

#include "countqa/provider_wire.h"

namespace countqa {

enum class CacheMode { kOff, kRecord, kReplay };

std::string_view ToString(CacheMode mode);
CacheMode ParseCacheMode(std::string_view name);  // throws ContractError

// Provider outputs persisted as JSON Lines, one record per call:
//   {"kind": ..., "input_hash": ..., "input": ..., "output": ...}
// input_hash is the hex SHA-256 of the input's compact JSON dump (object
// keys sorted). Lookups take a shared lock; recording takes an exclusive one
// and appends to the file immediately.
class ProviderCache {
 public:
  // Loads any existing records. Replay mode requires the file to exist.
  // Throws DataError on unreadable files or malformed lines.
  ProviderCache(std::filesystem::path path, CacheMode mode);

  static std::string InputHash(const Json &input);

  std::optional<Json> Lookup(const std::string &kind, const std::string &hash) const;
  // Keeps the first output stored for a key.
  void Store(const std::string &kind, const std::string &hash, const Json &input,
             const Json &output);

  CacheMode mode() const { return mode_; }
  size_t size() const;

 private:
  std::filesystem::path path_;
  CacheMode mode_;
  mutable std::shared_mutex mu_;
  std::map<std::pair<std::string, std::string>, Json> entries_;
  std::ofstream out_;
};

// Wraps another backend with a ProviderCache. In replay mode inner may be
// null and a miss raises ProviderError(kReplayMiss). Records are filed
// under `label`, which defaults to the wire kind name; use distinct labels
// when two backends of the same kind share one cache.
class CachingBackend : public JsonBackend {
 public:
  CachingBackend(std::shared_ptr<ProviderCache> cache, std::shared_ptr<const JsonBackend> inner,
                 std::string label = "");

  std::vector<Json> Invoke(ProviderKind kind, const std::vector<Json> &inputs) const override;
  ProviderDescriptor Describe(ProviderKind kind) const override;

 private:
  std::shared_ptr<ProviderCache> cache_;
  std::shared_ptr<const JsonBackend> inner_;
  std::string label_;
};

}  // namespace countqa

#endif  // COUNTQA_PROVIDER_CACHE_H_
