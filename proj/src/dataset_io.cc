#include "countqa/dataset_io.h"

#include <fstream>
#include <set>
#include <sstream>

#include "countqa/errors.h"
#include "countqa/text_util.h"

namespace countqa {
namespace {

using nlohmann::json;

[[noreturn]] void FieldError(const std::string &field, const std::string &what) {
  throw DataError("field '" + field + "': " + what);
}

const json &Required(const json &obj, const std::string &key, const std::string &path) {
  if (!obj.contains(key)) FieldError(path + key, "missing");
  return obj[key];
}

std::string String(const json &v, const std::string &field, bool nfc = true) {
  if (!v.is_string()) FieldError(field, "expected a string");
  return nfc ? text::ToNfc(v.get<std::string>()) : v.get<std::string>();
}

std::string NonEmptyString(const json &v, const std::string &field) {
  std::string s = String(v, field);
  if (text::NormalizeSpace(s).empty()) FieldError(field, "must not be empty");
  return s;
}

double Number(const json &v, const std::string &field) {
  if (!v.is_number()) FieldError(field, "expected a number");
  return v.get<double>();
}

std::optional<double> OptionalNumber(const json &obj, const std::string &key,
                                     const std::string &path) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  return Number(obj[key], path + key);
}

const json &Array(const json &v, const std::string &field) {
  if (!v.is_array()) FieldError(field, "expected an array");
  return v;
}

const json &Object(const json &v, const std::string &field) {
  if (!v.is_object()) FieldError(field, "expected an object");
  return v;
}

int Integer(const json &v, const std::string &field) {
  if (!v.is_number_integer()) FieldError(field, "expected an integer");
  return v.get<int>();
}

template <typename Enum, typename Parse>
Enum EnumField(const json &v, const std::string &field, Parse parse) {
  const std::string s = String(v, field, false);
  try {
    return parse(s);
  } catch (const ContractError &e) {
    FieldError(field, e.what());
  }
}

json OptionalJson(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

json ToJson(const ScoredCnp &c) {
  return json{{"cnp_text", c.cnp_text},
              {"value", c.value},
              {"confidence", c.confidence},
              {"segment_id", c.segment_id},
              {"rank", c.rank}};
}

json ToJson(const AnswerSpan &s) {
  return json{{"segment_id", s.segment_id}, {"span", s.span}, {"confidence", s.confidence}};
}

ScoredCnp ParseCnp(const json &v, const std::string &field) {
  Object(v, field);
  const std::string p = field + ".";
  return {String(Required(v, "cnp_text", p), p + "cnp_text", false),
          Number(Required(v, "value", p), p + "value"),
          Number(Required(v, "confidence", p), p + "confidence"),
          String(Required(v, "segment_id", p), p + "segment_id", false),
          Integer(Required(v, "rank", p), p + "rank")};
}

std::vector<ScoredCnp> ParseCnpList(const json &obj, const std::string &key) {
  std::vector<ScoredCnp> out;
  const json &arr = Array(Required(obj, key, ""), key);
  for (size_t i = 0; i < arr.size(); ++i) {
    out.push_back(ParseCnp(arr[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<AnswerSpan> ParseSpans(const json &obj, const std::string &key) {
  std::vector<AnswerSpan> out;
  const json &arr = Array(Required(obj, key, ""), key);
  for (size_t i = 0; i < arr.size(); ++i) {
    const std::string f = key + "[" + std::to_string(i) + "]";
    const std::string p = f + ".";
    Object(arr[i], f);
    out.push_back({String(Required(arr[i], "segment_id", p), p + "segment_id", false),
                   String(Required(arr[i], "span", p), p + "span", false),
                   Number(Required(arr[i], "confidence", p), p + "confidence")});
  }
  return out;
}

std::vector<std::string> ReadLines(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));
  if (in.bad()) throw DataError("error reading " + path.string());
  return lines;
}

bool Blank(const std::string &line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

DatasetRecord ParseDatasetRecord(const json &line) {
  Object(line, "<record>");
  DatasetRecord r;
  r.id = NonEmptyString(Required(line, "id", ""), "id");
  r.query = NonEmptyString(Required(line, "query", ""), "query");
  r.gold.query_id = r.id;
  r.gold.gold_count = OptionalNumber(line, "gold_count", "");
  if (r.gold.gold_count && !(*r.gold.gold_count >= 1.0)) {
    FieldError("gold_count", "must be a count >= 1 or null");
  }
  if (line.contains("gold_source") && !line["gold_source"].is_null()) {
    r.gold.source =
        EnumField<GoldSource>(line["gold_source"], "gold_source", ParseGoldSource);
  }
  if (line.contains("gold_instances") && !line["gold_instances"].is_null()) {
    const json &arr = Array(line["gold_instances"], "gold_instances");
    for (size_t i = 0; i < arr.size(); ++i) {
      const std::string f = "gold_instances[" + std::to_string(i) + "]";
      Object(arr[i], f);
      GoldInstance g;
      g.canonical = NonEmptyString(Required(arr[i], "canonical", f + "."), f + ".canonical");
      if (arr[i].contains("aliases") && !arr[i]["aliases"].is_null()) {
        const json &aliases = Array(arr[i]["aliases"], f + ".aliases");
        for (size_t j = 0; j < aliases.size(); ++j) {
          g.aliases.push_back(String(aliases[j], f + ".aliases[" + std::to_string(j) + "]"));
        }
      }
      r.gold.gold_instances.push_back(std::move(g));
    }
  }

  const json &segments = Array(Required(line, "segments", ""), "segments");
  std::set<std::string> segment_ids;
  for (size_t i = 0; i < segments.size(); ++i) {
    const std::string f = "segments[" + std::to_string(i) + "]";
    Object(segments[i], f);
    TextSegment s;
    s.id = NonEmptyString(Required(segments[i], "id", f + "."), f + ".id");
    s.rank = Integer(Required(segments[i], "rank", f + "."), f + ".rank");
    s.text = NonEmptyString(Required(segments[i], "text", f + "."), f + ".text");
    if (!segment_ids.insert(s.id).second) FieldError(f + ".id", "duplicate segment id");
    if (!r.segments.empty() && s.rank <= r.segments.back().rank) {
      FieldError(f + ".rank", "ranks must be strictly increasing");
    }
    r.segments.push_back(std::move(s));
  }

  if (line.contains("cnp_gold") && !line["cnp_gold"].is_null()) {
    const json &arr = Array(line["cnp_gold"], "cnp_gold");
    std::vector<CnpGoldLabel> labels;
    for (size_t i = 0; i < arr.size(); ++i) {
      const std::string f = "cnp_gold[" + std::to_string(i) + "]";
      Object(arr[i], f);
      labels.push_back({NonEmptyString(Required(arr[i], "text", f + "."), f + ".text"),
                        EnumField<CnpCategory>(Required(arr[i], "label", f + "."), f + ".label",
                                               ParseCnpCategory)});
    }
    r.gold.category_labels = std::move(labels);
  }
  return r;
}

json ToJson(const DatasetRecord &r) {
  json instances = json::array();
  for (const GoldInstance &g : r.gold.gold_instances) {
    instances.push_back(json{{"canonical", g.canonical}, {"aliases", g.aliases}});
  }
  json segments = json::array();
  for (const TextSegment &s : r.segments) {
    segments.push_back(json{{"id", s.id}, {"rank", s.rank}, {"text", s.text}});
  }
  json out{{"id", r.id},
           {"query", r.query},
           {"gold_count", OptionalJson(r.gold.gold_count)},
           {"gold_source", ToString(r.gold.source)},
           {"gold_instances", std::move(instances)},
           {"segments", std::move(segments)}};
  if (r.gold.category_labels) {
    json labels = json::array();
    for (const CnpGoldLabel &l : *r.gold.category_labels) {
      labels.push_back(json{{"text", l.text}, {"label", ToString(l.label)}});
    }
    out["cnp_gold"] = std::move(labels);
  }
  return out;
}

DatasetLoad LoadDataset(const std::filesystem::path &path, LoadMode mode) {
  DatasetLoad load;
  const std::vector<std::string> lines = ReadLines(path);
  std::set<std::string> ids;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Blank(lines[i])) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    try {
      json parsed;
      try {
        parsed = json::parse(lines[i]);
      } catch (const json::parse_error &e) {
        throw DataError(std::string("not valid JSON: ") + e.what());
      }
      DatasetRecord record = ParseDatasetRecord(parsed);
      if (!ids.insert(record.id).second) FieldError("id", "duplicate query id '" + record.id + "'");
      load.records.push_back(std::move(record));
    } catch (const DataError &e) {
      if (mode == LoadMode::kStrict) throw DataError(where + ": " + e.what());
      load.warnings.push_back(where + ": " + e.what() + " (skipped)");
    }
  }
  if (load.records.empty() && load.warnings.empty()) {
    load.warnings.push_back(path.string() + ": dataset is empty");
  }
  return load;
}

ScoredCnp ToScoredCnp(const CountCandidate &c) {
  return {c.cnp_text, c.value, c.confidence(), c.answer_span.segment_id, c.segment_rank};
}

json ToJson(const PredictionRecord &r) {
  auto cnps = [](const std::vector<ScoredCnp> &list) {
    json arr = json::array();
    for (const ScoredCnp &c : list) arr.push_back(ToJson(c));
    return arr;
  };
  auto spans = [](const std::vector<AnswerSpan> &list) {
    json arr = json::array();
    for (const AnswerSpan &s : list) arr.push_back(ToJson(s));
    return arr;
  };
  json instances = json::array();
  for (const RankedInstance &i : r.instances) {
    instances.push_back(json{{"instance", i.instance}, {"score", i.score}, {"postings", i.postings}});
  }
  return json{
      {"id", r.id},
      {"query", r.query},
      {"answer_type", r.answer_type ? json(*r.answer_type) : json(nullptr)},
      {"c_pred", OptionalJson(r.c_pred)},
      {"config",
       {{"theta_inference", r.config.theta_inference},
        {"theta_explanation", r.config.theta_explanation},
        {"alpha", r.config.alpha},
        {"strategy_count", ToString(r.config.strategy_count)},
        {"strategy_instance", ToString(r.config.strategy_instance)}}},
      {"candidates", cnps(r.candidates)},
      {"cnp_rep", r.cnp_rep ? ToJson(*r.cnp_rep) : json(nullptr)},
      {"synonyms", cnps(r.synonyms)},
      {"subgroups", cnps(r.subgroups)},
      {"incomparables", cnps(r.incomparables)},
      {"instances", std::move(instances)},
      {"provenance", spans(r.provenance)},
      {"instance_provenance", spans(r.instance_provenance)},
      {"diagnostics", r.diagnostics},
  };
}

PredictionRecord ParsePredictionRecord(const json &line) {
  Object(line, "<record>");
  PredictionRecord r;
  r.id = String(Required(line, "id", ""), "id", false);
  r.query = String(Required(line, "query", ""), "query", false);
  const json &answer_type = Required(line, "answer_type", "");
  if (!answer_type.is_null()) r.answer_type = String(answer_type, "answer_type", false);
  Required(line, "c_pred", "");
  r.c_pred = OptionalNumber(line, "c_pred", "");

  const json &config = Object(Required(line, "config", ""), "config");
  r.config.theta_inference = Number(Required(config, "theta_inference", "config."), "config.theta_inference");
  r.config.theta_explanation =
      Number(Required(config, "theta_explanation", "config."), "config.theta_explanation");
  r.config.alpha = Number(Required(config, "alpha", "config."), "config.alpha");
  r.config.strategy_count = EnumField<CountStrategy>(
      Required(config, "strategy_count", "config."), "config.strategy_count", ParseCountStrategy);
  r.config.strategy_instance =
      EnumField<InstanceStrategy>(Required(config, "strategy_instance", "config."),
                                  "config.strategy_instance", ParseInstanceStrategy);

  r.candidates = ParseCnpList(line, "candidates");
  const json &rep = Required(line, "cnp_rep", "");
  if (!rep.is_null()) r.cnp_rep = ParseCnp(rep, "cnp_rep");
  r.synonyms = ParseCnpList(line, "synonyms");
  r.subgroups = ParseCnpList(line, "subgroups");
  r.incomparables = ParseCnpList(line, "incomparables");

  const json &instances = Array(Required(line, "instances", ""), "instances");
  for (size_t i = 0; i < instances.size(); ++i) {
    const std::string f = "instances[" + std::to_string(i) + "]";
    const std::string p = f + ".";
    Object(instances[i], f);
    const json &postings = Required(instances[i], "postings", p);
    if (!postings.is_number_unsigned()) FieldError(p + "postings", "expected a count");
    r.instances.push_back({String(Required(instances[i], "instance", p), p + "instance", false),
                           Number(Required(instances[i], "score", p), p + "score"),
                           postings.get<size_t>()});
  }
  r.provenance = ParseSpans(line, "provenance");
  r.instance_provenance = ParseSpans(line, "instance_provenance");
  const json &diagnostics = Array(Required(line, "diagnostics", ""), "diagnostics");
  for (size_t i = 0; i < diagnostics.size(); ++i) {
    r.diagnostics.push_back(
        String(diagnostics[i], "diagnostics[" + std::to_string(i) + "]", false));
  }
  return r;
}

std::string SerializePredictions(const std::vector<PredictionRecord> &records) {
  std::string out;
  for (const PredictionRecord &r : records) {
    out += ToJson(r).dump();
    out.push_back('\n');
  }
  return out;
}

void WritePredictions(const std::filesystem::path &path,
                      const std::vector<PredictionRecord> &records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << SerializePredictions(records);
  out.flush();
  if (!out) throw DataError("failed writing " + path.string());
}

std::vector<PredictionRecord> LoadPredictions(const std::filesystem::path &path) {
  std::vector<PredictionRecord> records;
  const std::vector<std::string> lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Blank(lines[i])) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    try {
      records.push_back(ParsePredictionRecord(json::parse(lines[i])));
    } catch (const json::parse_error &e) {
      throw DataError(where + ": not valid JSON: " + e.what());
    } catch (const DataError &e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return records;
}

}  // namespace countqa
