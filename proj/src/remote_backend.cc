#include "countqa/remote_backend.h"

#include <thread>

#include "countqa/errors.h"
#include "httplib.h"

namespace countqa {
namespace {

using Reason = ProviderError::Reason;

struct Attempt {
  Reason reason = Reason::kTransport;
  std::string message;
};

}  // namespace

RemoteBackend::RemoteBackend(ProviderKind kind, std::string url, RemoteOptions options)
    : kind_(kind), url_(std::move(url)), options_(options) {
  constexpr std::string_view kScheme = "http://";
  if (url_.rfind(kScheme, 0) != 0) {
    throw ContractError("provider endpoint must start with http://: '" + url_ + "'");
  }
  const size_t slash = url_.find('/', kScheme.size());
  origin_ = url_.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url_.substr(slash);
  if (origin_.size() == kScheme.size()) throw ContractError("provider endpoint has no host");
}

std::vector<Json> RemoteBackend::Invoke(ProviderKind kind, const std::vector<Json> &inputs) const {
  if (kind != kind_) {
    throw ProviderError(Reason::kUnbound, "endpoint " + url_ + " serves " +
                                              std::string(ToString(kind_)) + ", not " +
                                              std::string(ToString(kind)));
  }
  if (inputs.empty()) return {};
  const std::string body = Json{{"kind", ToString(kind)}, {"inputs", inputs}}.dump();

  auto backoff = options_.backoff;
  Attempt last;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(origin_);
    client.set_connection_timeout(options_.connect_timeout);
    client.set_read_timeout(options_.read_timeout);
    client.set_write_timeout(options_.read_timeout);

    const auto started = std::chrono::steady_clock::now();
    httplib::Result res = client.Post(path_, body, "application/json");
    if (!res) {
      const auto elapsed = std::chrono::steady_clock::now() - started;
      const httplib::Error err = res.error();
      const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                             (err == httplib::Error::Read && elapsed >= options_.read_timeout);
      last = {timed_out ? Reason::kTimeout : Reason::kTransport,
              url_ + ": " + httplib::to_string(err)};
      continue;
    }
    if (res->status >= 500) {
      last = {Reason::kTransport, url_ + ": HTTP " + std::to_string(res->status)};
      continue;
    }
    if (res->status != 200) {
      throw ProviderError(Reason::kBadResponse,
                          url_ + ": HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    Json reply;
    try {
      reply = Json::parse(res->body);
    } catch (const Json::parse_error &) {
      throw ProviderError(Reason::kBadResponse, url_ + ": response is not JSON");
    }
    if (!reply.is_object() || !reply.contains("outputs") || !reply["outputs"].is_array() ||
        reply["outputs"].size() != inputs.size()) {
      throw ProviderError(Reason::kBadResponse,
                          url_ + ": response needs an 'outputs' array matching the inputs");
    }
    return reply["outputs"].get<std::vector<Json>>();
  }
  throw ProviderError(last.reason, last.message + " (after " +
                                       std::to_string(options_.retries + 1) + " attempts)");
}

ProviderDescriptor RemoteBackend::Describe(ProviderKind kind) const {
  return {kind, "remote", url_};
}

}  // namespace countqa
