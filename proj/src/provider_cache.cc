#include "countqa/provider_cache.h"

#include <openssl/sha.h>

#include <cstdio>

#include "countqa/errors.h"

namespace countqa {

std::string_view ToString(CacheMode mode) {
  switch (mode) {
    case CacheMode::kOff:
      return "off";
    case CacheMode::kRecord:
      return "record";
    case CacheMode::kReplay:
      return "replay";
  }
  return "off";
}

CacheMode ParseCacheMode(std::string_view name) {
  if (name == "off") return CacheMode::kOff;
  if (name == "record") return CacheMode::kRecord;
  if (name == "replay") return CacheMode::kReplay;
  throw ContractError("cache mode must be record, replay or off: '" + std::string(name) + "'");
}

ProviderCache::ProviderCache(std::filesystem::path path, CacheMode mode)
    : path_(std::move(path)), mode_(mode) {
  if (mode_ == CacheMode::kOff) return;
  std::error_code ec;
  const bool exists = std::filesystem::exists(path_, ec);
  if (!exists && mode_ == CacheMode::kReplay) {
    throw DataError("replay cache not found: " + path_.string());
  }
  if (exists) {
    std::ifstream in(path_);
    if (!in) throw DataError("cannot read cache file: " + path_.string());
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const std::string where = path_.string() + ":" + std::to_string(line_no);
      Json record;
      try {
        record = Json::parse(line);
      } catch (const Json::parse_error &) {
        throw DataError(where + ": cache record is not JSON");
      }
      if (!record.is_object() || !record.contains("kind") || !record["kind"].is_string() ||
          !record.contains("input_hash") || !record["input_hash"].is_string() ||
          !record.contains("output")) {
        throw DataError(where + ": cache record needs kind, input_hash and output");
      }
      entries_.try_emplace({record["kind"].get<std::string>(), record["input_hash"].get<std::string>()},
                           record["output"]);
    }
  }
  if (mode_ == CacheMode::kRecord) {
    out_.open(path_, std::ios::app);
    if (!out_) throw DataError("cannot write cache file: " + path_.string());
  }
}

std::string ProviderCache::InputHash(const Json &input) {
  const std::string bytes = input.dump();
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char *>(bytes.data()), bytes.size(), digest);
  std::string hex(2 * SHA256_DIGEST_LENGTH, '0');
  for (int i = 0; i < SHA256_DIGEST_LENGTH; ++i) {
    std::snprintf(&hex[2 * i], 3, "%02x", digest[i]);
  }
  return hex;
}

std::optional<Json> ProviderCache::Lookup(const std::string &kind, const std::string &hash) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find({kind, hash});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ProviderCache::Store(const std::string &kind, const std::string &hash, const Json &input,
                          const Json &output) {
  std::unique_lock lock(mu_);
  if (!entries_.try_emplace({kind, hash}, output).second) return;
  if (!out_.is_open()) return;
  const Json record{{"kind", kind}, {"input_hash", hash}, {"input", input}, {"output", output}};
  out_ << record.dump() << '\n';
  out_.flush();
  if (!out_) throw DataError("failed writing cache file: " + path_.string());
}

size_t ProviderCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

CachingBackend::CachingBackend(std::shared_ptr<ProviderCache> cache,
                               std::shared_ptr<const JsonBackend> inner, std::string label)
    : cache_(std::move(cache)), inner_(std::move(inner)), label_(std::move(label)) {
  if (!cache_) throw ContractError("caching backend needs a cache");
  if (!inner_ && cache_->mode() != CacheMode::kReplay) {
    throw ContractError("caching backend needs an inner backend unless replaying");
  }
}

std::vector<Json> CachingBackend::Invoke(ProviderKind kind, const std::vector<Json> &inputs) const {
  const std::string label = label_.empty() ? std::string(ToString(kind)) : label_;
  if (cache_->mode() == CacheMode::kOff) return inner_->Invoke(kind, inputs);

  std::vector<Json> outputs(inputs.size());
  std::vector<size_t> missing;
  std::vector<std::string> hashes(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) {
    hashes[i] = ProviderCache::InputHash(inputs[i]);
    if (auto hit = cache_->Lookup(label, hashes[i])) {
      outputs[i] = std::move(*hit);
    } else {
      missing.push_back(i);
    }
  }
  if (missing.empty()) return outputs;
  if (cache_->mode() == CacheMode::kReplay) {
    throw ProviderError(ProviderError::Reason::kReplayMiss,
                        "no cached " + label + " output for input " + inputs[missing[0]].dump());
  }

  std::vector<Json> batch;
  batch.reserve(missing.size());
  for (size_t i : missing) batch.push_back(inputs[i]);
  std::vector<Json> fresh = inner_->Invoke(kind, batch);
  if (fresh.size() != batch.size()) {
    throw ProviderError(ProviderError::Reason::kBadResponse, "backend returned a short batch");
  }
  for (size_t j = 0; j < missing.size(); ++j) {
    const size_t i = missing[j];
    // Item failures are errors, not outputs; never persist them.
    if (!(fresh[j].is_object() && fresh[j].contains("error"))) {
      cache_->Store(label, hashes[i], inputs[i], fresh[j]);
    }
    outputs[i] = std::move(fresh[j]);
  }
  return outputs;
}

ProviderDescriptor CachingBackend::Describe(ProviderKind kind) const {
  if (inner_) return inner_->Describe(kind);
  return {kind, "replay", std::nullopt};
}

}  // namespace countqa
