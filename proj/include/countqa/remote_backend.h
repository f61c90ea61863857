#ifndef COUNTQA_REMOTE_BACKEND_H_
#define COUNTQA_REMOTE_BACKEND_H_

#include <chrono>
#include <string>

#include "countqa/provider_wire.h"

namespace countqa {

struct RemoteOptions {
  std::chrono::milliseconds connect_timeout{5000};
  std::chrono::milliseconds read_timeout{30000};
  int retries = 2;
  std::chrono::milliseconds backoff{200};  // doubled after every failed attempt
};

// POSTs wire requests to a single endpoint URL ("http://host:port/path").
// Transport errors, timeouts and 5xx replies are retried; 4xx replies and
// malformed bodies are not. The final failure is raised as ProviderError
// with kTimeout, kTransport or kBadResponse.
class RemoteBackend : public JsonBackend {
 public:
  RemoteBackend(ProviderKind kind, std::string url, RemoteOptions options = {});

  std::vector<Json> Invoke(ProviderKind kind, const std::vector<Json> &inputs) const override;
  ProviderDescriptor Describe(ProviderKind kind) const override;

 private:
  ProviderKind kind_;
  std::string url_;
  std::string origin_;  // scheme://host:port
  std::string path_;
  RemoteOptions options_;
};

}  // namespace countqa

#endif  // COUNTQA_REMOTE_BACKEND_H_
