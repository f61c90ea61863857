#include "countqa/cli.h"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "countqa/dataset_io.h"
#include "countqa/errors.h"
#include "countqa/pipeline.h"
#include "countqa/provider_factory.h"
#include "countqa/service.h"

namespace countqa {
namespace {

using nlohmann::json;

// Reads TOML/INI through CLI11, or JSON when the file starts with '{'.
// Keys may use '_' or '-'; both map to the flag of the same name.
class ConfigFile : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream &input) const override {
    const std::string content{std::istreambuf_iterator<char>(input), {}};
    const size_t first = content.find_first_not_of(" \t\r\n");
    std::vector<CLI::ConfigItem> items;
    if (first != std::string::npos && content[first] == '{') {
      json doc;
      try {
        doc = json::parse(content);
      } catch (const json::parse_error &e) {
        throw CLI::ConfigError(std::string("config file is not valid JSON: ") + e.what());
      }
      Flatten(doc, {}, items);
    } else {
      std::istringstream in(content);
      items = CLI::ConfigTOML::from_config(in);
    }
    for (CLI::ConfigItem &item : items) {
      if (item.name != "++" && item.name != "--") {
        std::replace(item.name.begin(), item.name.end(), '_', '-');
      }
    }
    // CLI11 reads the file before the environment, so drop keys that a
    // COUNTQA_* variable already sets.
    std::erase_if(items, [](const CLI::ConfigItem &item) {
      std::string env = "COUNTQA_" + item.name;
      std::replace(env.begin(), env.end(), '-', '_');
      std::transform(env.begin(), env.end(), env.begin(),
                     [](unsigned char c) { return std::toupper(c); });
      const char *value = std::getenv(env.c_str());
      return item.parents.empty() && value != nullptr && *value != '\0';
    });
    return items;
  }

 private:
  static std::string Scalar(const json &v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  }

  static void Flatten(const json &obj, const std::vector<std::string> &parents,
                      std::vector<CLI::ConfigItem> &items) {
    if (!obj.is_object()) throw CLI::ConfigError("config file must hold a JSON object");
    for (const auto &[key, value] : obj.items()) {
      if (value.is_object()) {
        std::vector<std::string> nested = parents;
        nested.push_back(key);
        Flatten(value, nested, items);
        continue;
      }
      if (value.is_null()) continue;
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const json &v : value) item.inputs.push_back(Scalar(v));
      } else {
        item.inputs.push_back(Scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

template <typename Parse>
CLI::Validator NameValidator(Parse parse, const std::string &what) {
  return CLI::Validator(
      [parse](std::string &value) {
        try {
          parse(value);
          return std::string();
        } catch (const ContractError &e) {
          return std::string(e.what());
        }
      },
      what);
}

struct Options {
  double theta_inference = 0.5;
  double theta_explanation = 0.2;
  double alpha = 0.3;
  std::string strategy_count = "WeightedMedian";
  std::string strategy_instance = "TypeCompatibility";
  ProviderBindings bindings;
  std::string cache_mode = "off";
  int timeout_ms = 30000;
  int retries = 2;
  size_t jobs = 1;
  bool lenient = false;

  std::string dataset;
  std::vector<std::string> datasets;
  std::string output;
  std::string predictions;
  std::string report;
  std::vector<int> ks = {1, 5, 10};
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cors_origin = "*";

  PredictionConfig Config() const {
    return {theta_inference, theta_explanation, alpha, ParseCountStrategy(strategy_count),
            ParseInstanceStrategy(strategy_instance)};
  }

  ProviderBindings Bindings() const {
    ProviderBindings b = bindings;
    b.cache_mode = ParseCacheMode(cache_mode);
    b.remote.read_timeout = std::chrono::milliseconds(timeout_ms);
    b.remote.connect_timeout = std::chrono::milliseconds(std::min(timeout_ms, 5000));
    b.remote.retries = retries;
    return b;
  }
};

void AddSharedOptions(CLI::App &app, Options &o) {
  const auto unit = CLI::Range(0.0, 1.0);
  app.add_option("--theta-inference", o.theta_inference,
                 "Span confidence threshold for answer inference")
      ->check(unit)->envname("COUNTQA_THETA_INFERENCE")->capture_default_str();
  app.add_option("--theta-explanation", o.theta_explanation,
                 "Span confidence threshold for instance explanation")
      ->check(unit)->envname("COUNTQA_THETA_EXPLANATION")->capture_default_str();
  app.add_option("--alpha", o.alpha, "Relative half-width of the synonym count interval")
      ->check(unit)->envname("COUNTQA_ALPHA")->capture_default_str();
  app.add_option("--strategy-count", o.strategy_count,
                 "MostConfident, MostFrequent, Median or WeightedMedian")
      ->check(NameValidator(ParseCountStrategy, "COUNT_STRATEGY"))
      ->envname("COUNTQA_STRATEGY_COUNT")->capture_default_str();
  app.add_option("--strategy-instance", o.strategy_instance,
                 "NoConsolidation, ContextFrequency, SummedConfidence or TypeCompatibility")
      ->check(NameValidator(ParseInstanceStrategy, "INSTANCE_STRATEGY"))
      ->envname("COUNTQA_STRATEGY_INSTANCE")->capture_default_str();

  const std::string binding = " provider: lexical, none or an http:// endpoint";
  app.add_option("--span-provider", o.bindings.span, "Count span predictor" + binding)
      ->envname("COUNTQA_SPAN_PROVIDER")->capture_default_str();
  app.add_option("--instance-span-provider", o.bindings.instance_span,
                 "Instance span predictor" + binding + " (default: same as --span-provider)")
      ->envname("COUNTQA_INSTANCE_SPAN_PROVIDER");
  app.add_option("--similarity-provider", o.bindings.similarity, "Similarity" + binding)
      ->envname("COUNTQA_SIMILARITY_PROVIDER")->capture_default_str();
  app.add_option("--ner-provider", o.bindings.ner, "Entity recognizer" + binding)
      ->envname("COUNTQA_NER_PROVIDER")->capture_default_str();
  app.add_option("--entailment-provider", o.bindings.entailment, "Entailment" + binding)
      ->envname("COUNTQA_ENTAILMENT_PROVIDER")->capture_default_str();
  app.add_option("--pos-provider", o.bindings.pos,
                 "Part-of-speech tagger" + binding + " (none falls back to the built-in tagger)")
      ->envname("COUNTQA_POS_PROVIDER")->capture_default_str();
  app.add_option("--cache", o.bindings.cache_path, "Provider record/replay cache (JSON Lines)")
      ->envname("COUNTQA_CACHE");
  app.add_option("--cache-mode", o.cache_mode, "record, replay or off")
      ->check(CLI::IsMember({"record", "replay", "off"}))
      ->envname("COUNTQA_CACHE_MODE")->capture_default_str();
  app.add_option("--provider-timeout-ms", o.timeout_ms, "Read timeout for remote providers")
      ->check(CLI::PositiveNumber)->envname("COUNTQA_PROVIDER_TIMEOUT_MS")->capture_default_str();
  app.add_option("--provider-retries", o.retries, "Retries for failed remote calls")
      ->check(CLI::NonNegativeNumber)->envname("COUNTQA_PROVIDER_RETRIES")->capture_default_str();
  app.add_option("--jobs", o.jobs, "Queries processed in parallel")
      ->check(CLI::PositiveNumber)->envname("COUNTQA_JOBS")->capture_default_str();
  app.add_flag("--lenient", o.lenient, "Skip malformed dataset lines instead of failing")
      ->envname("COUNTQA_LENIENT");
}

DatasetLoad Load(const std::string &path, const Options &o, std::ostream &err) {
  DatasetLoad load = LoadDataset(path, o.lenient ? LoadMode::kLenient : LoadMode::kStrict);
  for (const std::string &w : load.warnings) err << "warning: " << w << "\n";
  return load;
}

std::string FormatValue(const std::optional<double> &v) {
  if (!v) return "null";
  std::ostringstream os;
  os << *v;
  return os.str();
}

int CmdAnswer(const Options &o, std::ostream &out, std::ostream &err) {
  const DatasetLoad load = Load(o.dataset, o, err);
  const Pipeline pipeline(BuildProviders(o.Bindings()), o.Config());
  const std::vector<QueryRun> runs = pipeline.RunAll(load.records, o.jobs);

  std::vector<PredictionRecord> records;
  size_t failed = 0;
  for (const QueryRun &run : runs) {
    const PredictionRecord &r = run.record;
    out << r.id << "\tc_pred=" << FormatValue(r.c_pred) << "\tsynonyms=" << r.synonyms.size()
        << "\tsubgroups=" << r.subgroups.size() << "\tincomparables=" << r.incomparables.size()
        << "\tinstances=" << r.instances.size();
    if (run.inference_failed || run.explanation_failed) {
      ++failed;
      out << "\tPROVIDER FAILURE";
    }
    out << "\n";
    records.push_back(r);
  }
  WritePredictions(o.output, records);
  out << "wrote " << records.size() << " predictions to " << o.output << "\n";
  if (failed > 0) {
    err << "error: providers failed on " << failed << " queries; see the diagnostics in "
        << o.output << "\n";
    return kExitProvider;
  }
  return kExitOk;
}

int CmdEvaluate(const Options &o, std::ostream &out, std::ostream &err) {
  const std::vector<PredictionRecord> predictions = LoadPredictions(o.predictions);
  const DatasetLoad load = Load(o.dataset, o, err);
  const EvalReport report = EvaluatePredictions(predictions, load.records, o.ks);
  out << FormatReport(report);
  if (!o.report.empty()) {
    std::ofstream file(o.report, std::ios::binary | std::ios::trunc);
    file << ToJson(report).dump(2) << "\n";
    if (!file) throw DataError("cannot write " + o.report);
  }
  return kExitOk;
}

int CmdValidate(const Options &o, std::ostream &out, std::ostream &err) {
  const DatasetLoad load = Load(o.dataset, o, err);
  size_t segments = 0;
  for (const DatasetRecord &r : load.records) segments += r.segments.size();
  out << o.dataset << ": " << load.records.size() << " queries, " << segments << " segments\n";
  const bool skipped = std::any_of(load.warnings.begin(), load.warnings.end(),
                                   [](const std::string &w) { return w.ends_with("(skipped)"); });
  return skipped ? kExitData : kExitOk;
}

int CmdServe(const Options &o, std::ostream &out, std::ostream &err) {
  std::map<std::string, std::vector<DatasetRecord>> datasets;
  for (const std::string &path : o.datasets) {
    std::string name = std::filesystem::path(path).stem().string();
    if (datasets.count(name)) {
      err << "error: two datasets named '" << name << "'\n";
      return kExitUsage;
    }
    datasets.emplace(std::move(name), Load(path, o, err).records);
  }
  auto pipeline = std::make_shared<const Pipeline>(BuildProviders(o.Bindings()), o.Config());
  Service service(pipeline, std::move(datasets), {o.host, o.port, o.cors_origin});

  // Block the stop signals here so that a dedicated thread can sigwait()
  // for them; the server threads inherit the mask.
  sigset_t stop_signals, previous;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, &previous);

  if (!service.Bind()) {
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    err << "error: cannot listen on " << o.host << ":" << o.port
        << " (address in use or not available)\n";
    return kExitUsage;
  }
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&stop_signals, &sig);
    service.Stop();
  });
  out << "serving on http://" << o.host << ":" << service.port() << std::endl;
  service.Serve();
  // Serve() can only return after Stop(); wake the waiter if something else
  // stopped the server.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  out << "stopped" << std::endl;
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  Options o;
  CLI::App app("Count question answering with contextualization and instance explanations",
               "countqa");
  app.config_formatter(std::make_shared<ConfigFile>());
  app.set_config("--config", "", "TOML or JSON file setting any flag; command line and "
                                 "COUNTQA_* environment variables take precedence")
      ->envname("COUNTQA_CONFIG");
  app.set_version_flag("--version", std::string(kVersion));
  app.fallthrough();
  app.require_subcommand(1);
  AddSharedOptions(app, o);

  CLI::App *answer = app.add_subcommand("answer", "Answer every query of a dataset");
  answer->add_option("--dataset", o.dataset, "Dataset (JSON Lines)")->required();
  answer->add_option("--output", o.output, "Predictions file to write (JSON Lines)")->required();

  CLI::App *evaluate = app.add_subcommand("evaluate", "Score predictions against dataset golds");
  evaluate->add_option("--predictions", o.predictions, "Predictions file")->required();
  evaluate->add_option("--dataset", o.dataset, "Dataset with gold annotations")->required();
  evaluate->add_option("--report", o.report, "Also write the report as JSON to this path");
  evaluate->add_option("--k", o.ks, "Cutoffs for instance metrics, e.g. 1,5,10")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI::App *serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--dataset", o.datasets, "Dataset(s) to expose, named by file stem");
  serve->add_option("--host", o.host, "Listen address")->capture_default_str();
  serve->add_option("--port", o.port, "Listen port (0 picks a free one)")
      ->check(CLI::Range(0, 65535))->envname("COUNTQA_PORT")->capture_default_str();
  serve->add_option("--cors-origin", o.cors_origin, "Allowed CORS origin; empty disables CORS")
      ->capture_default_str();

  CLI::App *validate = app.add_subcommand("validate-dataset", "Check a dataset file");
  validate->add_option("--dataset", o.dataset, "Dataset (JSON Lines)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (answer->parsed()) return CmdAnswer(o, out, err);
    if (evaluate->parsed()) return CmdEvaluate(o, out, err);
    if (serve->parsed()) return CmdServe(o, out, err);
    if (validate->parsed()) return CmdValidate(o, out, err);
  } catch (const ContractError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ProviderError &e) {
    err << "error: " << e.what() << "\n";
    return kExitProvider;
  }
  return kExitUsage;
}

}  // namespace countqa
