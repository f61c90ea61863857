#ifndef COUNTQA_SERVICE_H_
#define COUNTQA_SERVICE_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "countqa/dataset_io.h"
#include "countqa/pipeline.h"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace countqa {

inline constexpr std::string_view kVersion = "0.1.0";

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string cors_origin = "*";  // empty disables CORS headers
};

// JSON over HTTP:
//   POST /answer                 run the pipeline for one query
//   GET  /datasets               loaded datasets and their sizes
//   GET  /datasets/{id}/queries  query ids and texts of one dataset
//   GET  /health                 version and bound providers
// Requests are independent; per-request overrides never touch the defaults.
class Service {
 public:
  struct Reply {
    int status = 200;
    nlohmann::json body;
  };

  // datasets maps a dataset id (usually the file stem) to its records.
  Service(std::shared_ptr<const Pipeline> pipeline,
          std::map<std::string, std::vector<DatasetRecord>> datasets, ServiceOptions options = {});
  ~Service();

  // Transport-free handlers, also used by the HTTP routes.
  Reply Answer(const std::string &body) const;
  Reply Datasets() const;
  Reply DatasetQueries(const std::string &dataset_id) const;
  Reply Health() const;

  // Binds the listening socket; false when the address is unavailable.
  bool Bind();
  int port() const { return bound_port_; }
  // Serves on the bound socket until Stop(). Call Bind() first.
  void Serve();
  void Stop();

 private:
  void InstallRoutes();
  const DatasetRecord *FindQuery(const std::string &dataset, const std::string &id) const;

  std::shared_ptr<const Pipeline> pipeline_;
  std::map<std::string, std::vector<DatasetRecord>> datasets_;
  ServiceOptions options_;
  std::unique_ptr<httplib::Server> server_;
  int bound_port_ = -1;
};

}  // namespace countqa

#endif  // COUNTQA_SERVICE_H_
