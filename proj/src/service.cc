#include "countqa/service.h"

#include "countqa/errors.h"
#include "httplib.h"

namespace countqa {
namespace {

using nlohmann::json;

// Request validation failure; `field` is a path such as "segments[2].text".
struct BadRequest {
  std::string field;
  std::string message;
};

Service::Reply Error(int status, const std::string &message, const std::string &field = "") {
  json body{{"error", message}};
  if (!field.empty()) body["field"] = field;
  return {status, std::move(body)};
}

double UnitNumber(const json &v, const std::string &field) {
  if (!v.is_number()) throw BadRequest{field, "expected a number"};
  const double d = v.get<double>();
  if (!(d >= 0.0 && d <= 1.0)) throw BadRequest{field, "must lie in [0, 1]"};
  return d;
}

template <typename Enum, typename Parse>
Enum EnumValue(const json &v, const std::string &field, Parse parse) {
  if (!v.is_string()) throw BadRequest{field, "expected a string"};
  try {
    return parse(v.get<std::string>());
  } catch (const ContractError &e) {
    throw BadRequest{field, e.what()};
  }
}

PredictionConfig ApplyOverrides(PredictionConfig config, const json &overrides) {
  if (!overrides.is_object()) throw BadRequest{"overrides", "expected an object"};
  for (const auto &[key, value] : overrides.items()) {
    const std::string field = "overrides." + key;
    if (key == "theta_inference") {
      config.theta_inference = UnitNumber(value, field);
    } else if (key == "theta_explanation") {
      config.theta_explanation = UnitNumber(value, field);
    } else if (key == "alpha") {
      config.alpha = UnitNumber(value, field);
    } else if (key == "strategy_count") {
      config.strategy_count = EnumValue<CountStrategy>(value, field, ParseCountStrategy);
    } else if (key == "strategy_instance") {
      config.strategy_instance = EnumValue<InstanceStrategy>(value, field, ParseInstanceStrategy);
    } else {
      throw BadRequest{field, "unknown override"};
    }
  }
  return config;
}

std::vector<TextSegment> ParseSegments(const json &v) {
  if (!v.is_array()) throw BadRequest{"segments", "expected an array"};
  std::vector<TextSegment> segments;
  for (size_t i = 0; i < v.size(); ++i) {
    const std::string f = "segments[" + std::to_string(i) + "]";
    const json &item = v[i];
    TextSegment s{"s" + std::to_string(i + 1), static_cast<int>(i + 1), ""};
    if (item.is_string()) {
      s.text = item.get<std::string>();
    } else if (item.is_object()) {
      if (!item.contains("text") || !item["text"].is_string()) {
        throw BadRequest{f + ".text", "expected a string"};
      }
      s.text = item["text"].get<std::string>();
      if (item.contains("id")) {
        if (!item["id"].is_string() || item["id"].get<std::string>().empty()) {
          throw BadRequest{f + ".id", "expected a non-empty string"};
        }
        s.id = item["id"].get<std::string>();
      }
      if (item.contains("rank")) {
        if (!item["rank"].is_number_integer()) throw BadRequest{f + ".rank", "expected an integer"};
        s.rank = item["rank"].get<int>();
      }
    } else {
      throw BadRequest{f, "expected a string or an object"};
    }
    if (s.text.empty()) throw BadRequest{f + ".text", "must not be empty"};
    if (!segments.empty() && s.rank <= segments.back().rank) {
      throw BadRequest{f + ".rank", "ranks must be strictly increasing"};
    }
    for (const TextSegment &prev : segments) {
      if (prev.id == s.id) throw BadRequest{f + ".id", "duplicate segment id"};
    }
    segments.push_back(std::move(s));
  }
  return segments;
}

json DescribeJson(const ProviderDescriptor &d) {
  json out{{"kind", ToString(d.kind)}, {"name", d.name}};
  if (d.endpoint) out["endpoint"] = *d.endpoint;
  return out;
}

}  // namespace

Service::Service(std::shared_ptr<const Pipeline> pipeline,
                 std::map<std::string, std::vector<DatasetRecord>> datasets, ServiceOptions options)
    : pipeline_(std::move(pipeline)), datasets_(std::move(datasets)), options_(std::move(options)) {
  if (!pipeline_) throw ContractError("service needs a pipeline");
}

Service::~Service() = default;

const DatasetRecord *Service::FindQuery(const std::string &dataset, const std::string &id) const {
  for (const auto &[name, records] : datasets_) {
    if (!dataset.empty() && name != dataset) continue;
    for (const DatasetRecord &r : records) {
      if (r.id == id) return &r;
    }
  }
  return nullptr;
}

Service::Reply Service::Answer(const std::string &body) const {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::parse_error &) {
    return Error(400, "body is not valid JSON", "$");
  }
  try {
    if (!request.is_object()) throw BadRequest{"$", "expected an object"};
    const bool has_segments = request.contains("segments");
    const bool has_id = request.contains("dataset_query_id");
    if (has_segments == has_id) {
      throw BadRequest{"segments", "give exactly one of segments and dataset_query_id"};
    }
    PredictionConfig config = pipeline_->defaults();
    if (request.contains("overrides")) config = ApplyOverrides(config, request["overrides"]);

    std::string id;
    std::string query;
    std::vector<TextSegment> segments;
    if (request.contains("query")) {
      if (!request["query"].is_string() || request["query"].get<std::string>().empty()) {
        throw BadRequest{"query", "expected a non-empty string"};
      }
      query = request["query"].get<std::string>();
    }
    if (has_id) {
      if (!request["dataset_query_id"].is_string()) {
        throw BadRequest{"dataset_query_id", "expected a string"};
      }
      std::string dataset;
      if (request.contains("dataset")) {
        if (!request["dataset"].is_string()) throw BadRequest{"dataset", "expected a string"};
        dataset = request["dataset"].get<std::string>();
        if (!datasets_.count(dataset)) return Error(404, "unknown dataset '" + dataset + "'");
      }
      id = request["dataset_query_id"].get<std::string>();
      const DatasetRecord *record = FindQuery(dataset, id);
      if (!record) return Error(404, "unknown dataset query id '" + id + "'");
      if (query.empty()) query = record->query;
      segments = record->segments;
    } else {
      if (query.empty()) throw BadRequest{"query", "missing"};
      segments = ParseSegments(request["segments"]);
      id = request.value("id", std::string("adhoc"));
    }

    try {
      CheckBindings(pipeline_->providers(), config);
    } catch (const ProviderError &e) {
      throw BadRequest{"overrides.strategy_instance", e.what()};
    }
    const QueryRun run = pipeline_->Run(id, query, segments, config);
    if (run.inference_failed) {
      return {502, json{{"error", "span prediction failed on every segment"},
                        {"partial_results", false},
                        {"diagnostics", run.record.diagnostics}}};
    }
    if (run.explanation_failed) {
      return {502, json{{"error", "instance explanation failed"},
                        {"partial_results", true},
                        {"result", ToJson(run.record)}}};
    }
    return {200, ToJson(run.record)};
  } catch (const BadRequest &e) {
    return Error(400, e.message, e.field);
  } catch (const ContractError &e) {
    return Error(400, e.what());
  } catch (const ProviderError &e) {
    return {502, json{{"error", e.what()}, {"partial_results", false}}};
  }
}

Service::Reply Service::Datasets() const {
  json list = json::array();
  for (const auto &[name, records] : datasets_) {
    list.push_back(json{{"id", name}, {"queries", records.size()}});
  }
  return {200, json{{"datasets", std::move(list)}}};
}

Service::Reply Service::DatasetQueries(const std::string &dataset_id) const {
  auto it = datasets_.find(dataset_id);
  if (it == datasets_.end()) return Error(404, "unknown dataset '" + dataset_id + "'");
  json queries = json::array();
  for (const DatasetRecord &r : it->second) {
    queries.push_back(json{{"id", r.id}, {"query", r.query}, {"segments", r.segments.size()}});
  }
  return {200, json{{"dataset", dataset_id}, {"queries", std::move(queries)}}};
}

Service::Reply Service::Health() const {
  const ProviderSet &p = pipeline_->providers();
  json providers = json::object();
  auto add = [&](const std::string &role, const auto &provider) {
    providers[role] = provider ? DescribeJson(provider->Describe()) : json(nullptr);
  };
  add("span_predictor", p.count_predictor);
  add("instance_span_predictor", p.instance_predictor ? p.instance_predictor : p.count_predictor);
  add("similarity", p.similarity);
  add("entity_recognizer", p.ner);
  add("entailment", p.entailment);
  add("pos_tagger", p.pos_tagger);
  return {200, json{{"status", "ok"}, {"version", kVersion}, {"providers", std::move(providers)}}};
}

void Service::InstallRoutes() {
  auto send = [](httplib::Response &res, const Reply &reply) {
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
  };
  server_->Post("/answer", [this, send](const httplib::Request &req, httplib::Response &res) {
    send(res, Answer(req.body));
  });
  server_->Get("/datasets", [this, send](const httplib::Request &, httplib::Response &res) {
    send(res, Datasets());
  });
  server_->Get(R"(/datasets/([^/]+)/queries)",
               [this, send](const httplib::Request &req, httplib::Response &res) {
                 send(res, DatasetQueries(req.matches[1].str()));
               });
  server_->Get("/health", [this, send](const httplib::Request &, httplib::Response &res) {
    send(res, Health());
  });
  server_->Options(R"(/.*)", [](const httplib::Request &, httplib::Response &res) {
    res.status = 204;
  });
  if (!options_.cors_origin.empty()) {
    server_->set_default_headers({{"Access-Control-Allow-Origin", options_.cors_origin},
                                  {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                  {"Access-Control-Allow-Headers", "Content-Type"}});
  }
  server_->set_error_handler([send](const httplib::Request &, httplib::Response &res) {
    if (res.body.empty()) send(res, Error(res.status, "not found"));
  });
}

bool Service::Bind() {
  server_ = std::make_unique<httplib::Server>();
  // httplib's default sets SO_REUSEPORT, which would let a second server
  // share a port that is already in use.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  InstallRoutes();
  if (options_.port == 0) {
    bound_port_ = server_->bind_to_any_port(options_.host);
  } else {
    bound_port_ = server_->bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  return bound_port_ > 0;
}

void Service::Serve() {
  if (!server_ || bound_port_ <= 0) throw ContractError("Serve() needs a successful Bind()");
  server_->listen_after_bind();
}

void Service::Stop() {
  if (server_) server_->stop();
}

}  // namespace countqa
