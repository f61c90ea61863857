#ifndef COUNTQA_PROVIDER_FACTORY_H_
#define COUNTQA_PROVIDER_FACTORY_H_

#include <string>

#include "countqa/provider_cache.h"
#include "countqa/providers.h"
#include "countqa/remote_backend.h"

namespace countqa {

// Each binding is "lexical", "none", or an http:// endpoint URL.
struct ProviderBindings {
  std::string span = "lexical";
  std::string instance_span;  // empty: same as span
  std::string similarity = "lexical";
  std::string ner = "lexical";
  std::string entailment = "lexical";
  std::string pos = "lexical";
  std::string cache_path;
  CacheMode cache_mode = CacheMode::kOff;
  RemoteOptions remote;
};

// Throws ContractError for an unrecognised binding or a cache mode without
// a path, DataError when the cache file cannot be loaded.
ProviderSet BuildProviders(const ProviderBindings &bindings);

}  // namespace countqa

#endif  // COUNTQA_PROVIDER_FACTORY_H_
