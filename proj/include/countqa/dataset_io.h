#ifndef COUNTQA_DATASET_IO_H_
#define COUNTQA_DATASET_IO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "countqa/explainer.h"
#include "countqa/types.h"
#include "json.hpp"

namespace countqa {

// One dataset line:
//   {"id", "query", "gold_count", "gold_source",
//    "gold_instances": [{"canonical", "aliases"}],
//    "segments": [{"id", "rank", "text"}],
//    "cnp_gold": [{"text", "label"}]}
// id, query and segments are required; gold_count may be null or missing.
struct DatasetRecord {
  std::string id;
  std::string query;
  GoldAnnotation gold;
  std::vector<TextSegment> segments;

  bool operator==(const DatasetRecord &) const = default;
};

enum class LoadMode { kStrict, kLenient };

struct DatasetLoad {
  std::vector<DatasetRecord> records;
  std::vector<std::string> warnings;  // "path:line: message"
};

// Parses and validates a JSON Lines dataset, applying NFC to every string.
// Strict mode throws DataError on the first bad line; lenient mode skips it
// with a warning. Segment ranks must be strictly increasing and ids unique
// (query ids per file, segment ids per record).
DatasetLoad LoadDataset(const std::filesystem::path &path, LoadMode mode = LoadMode::kStrict);

// Validates a single decoded line. Throws DataError naming the field.
DatasetRecord ParseDatasetRecord(const nlohmann::json &line);
nlohmann::json ToJson(const DatasetRecord &record);

struct ScoredCnp {
  std::string cnp_text;
  double value = 0.0;
  double confidence = 0.0;
  std::string segment_id;
  int rank = 0;

  bool operator==(const ScoredCnp &) const = default;
};

ScoredCnp ToScoredCnp(const CountCandidate &candidate);

struct PredictionConfig {
  double theta_inference = 0.5;
  double theta_explanation = 0.2;
  double alpha = 0.3;
  CountStrategy strategy_count = CountStrategy::kWeightedMedian;
  InstanceStrategy strategy_instance = InstanceStrategy::kTypeCompatibility;

  bool operator==(const PredictionConfig &) const = default;
};

// Everything the pipeline produced for one query. This is both the
// predictions-file line and the service's answer body.
struct PredictionRecord {
  std::string id;
  std::string query;
  std::optional<std::string> answer_type;
  std::optional<double> c_pred;
  PredictionConfig config;
  std::vector<ScoredCnp> candidates;
  std::optional<ScoredCnp> cnp_rep;
  std::vector<ScoredCnp> synonyms;
  std::vector<ScoredCnp> subgroups;
  std::vector<ScoredCnp> incomparables;
  std::vector<RankedInstance> instances;
  std::vector<AnswerSpan> provenance;           // every span from the count predictor
  std::vector<AnswerSpan> instance_provenance;  // spans that fed the instance index
  std::vector<std::string> diagnostics;

  bool operator==(const PredictionRecord &) const = default;
};

// Object keys come out sorted; absent values are explicit nulls.
nlohmann::json ToJson(const PredictionRecord &record);
// Throws DataError naming the field.
PredictionRecord ParsePredictionRecord(const nlohmann::json &line);

// One record per line, in the given order. Throws DataError when the file
// cannot be written.
void WritePredictions(const std::filesystem::path &path,
                      const std::vector<PredictionRecord> &records);
std::string SerializePredictions(const std::vector<PredictionRecord> &records);
std::vector<PredictionRecord> LoadPredictions(const std::filesystem::path &path);

}  // namespace countqa

#endif  // COUNTQA_DATASET_IO_H_
