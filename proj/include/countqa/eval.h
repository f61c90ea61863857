#ifndef COUNTQA_EVAL_H_
#define COUNTQA_EVAL_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "countqa/types.h"
#include "json.hpp"

namespace countqa {

// ---- counts ----

// predicted within [0.9 * gold, 1.1 * gold], both ends inclusive.
// Throws ContractError unless gold > 0.
bool RelaxedMatch(double predicted, double gold);

// min(a, b) / max(a, b). Throws ContractError unless both are > 0.
double Proximity(double a, double b);

// Harmonic mean; 0 when either side is 0.
double HarmonicMean(double a, double b);

struct CountEvalInput {
  std::string id;
  std::optional<double> predicted;
  std::optional<double> gold;
};

struct CountEvalRow {
  std::string id;
  std::optional<double> predicted;
  std::optional<double> gold;
  std::optional<bool> relaxed_match;  // answered and gold known
  std::optional<double> proximity;
};

// Percentages are in [0, 100]. Relaxed precision and proximity are taken
// over answered queries that have a gold count; coverage over all queries.
// Either is 0 when no query qualifies.
struct CountEvalReport {
  double relaxed_precision = 0.0;
  double coverage = 0.0;
  double pc_tradeoff = 0.0;
  double proximity = 0.0;
  size_t total = 0;
  size_t answered = 0;
  size_t scored = 0;  // answered with gold
  std::vector<CountEvalRow> rows;
};

// Throws ContractError on an empty input.
CountEvalReport EvaluateCounts(std::span<const CountEvalInput> inputs);

// Positive iff the segment's count is within 10% of gold (inclusive).
std::vector<bool> LabelSegments(double gold_count,
                                std::span<const std::optional<double>> segment_counts);

// ---- instances ----

// Levenshtein distance over code points.
size_t EditDistance(std::u32string_view a, std::u32string_view b);

// Edit distance / longer length after case folding and whitespace
// normalization; 0 when both are empty.
double NormalizedEditDistance(std::string_view a, std::string_view b);

inline constexpr double kRelevanceThreshold = 0.1;

// True when the candidate is within kRelevanceThreshold (exclusive) of the
// canonical name or any alias.
bool InstanceRelevant(std::string_view candidate, const GoldInstance &gold);

struct InstanceEvalInput {
  std::string id;
  std::vector<std::string> ranked;
  std::vector<GoldInstance> gold;
};

// Fractions in [0, 1]. MAP@k is the mean over queries of precision among
// the top-k retrieved, dividing by min(k, retrieved) and scoring 0 when
// nothing was retrieved. AR@k is mean recall@k over gold instances, Hit@k
// the share of queries with a relevant item in the top k, MRR the mean
// reciprocal rank of the first relevant item (0 when none).
// Queries without gold instances are skipped.
struct InstanceEvalReport {
  std::vector<int> ks;
  std::map<int, double> map_at_k;
  std::map<int, double> ar_at_k;
  std::map<int, double> hit_at_k;
  double mrr = 0.0;
  size_t queries = 0;
};

// Per-query building blocks, exposed for testing.
std::vector<bool> RelevanceVector(std::span<const std::string> ranked,
                                  std::span<const GoldInstance> gold);
double PrecisionAtK(const std::vector<bool> &relevant, int k);
double RecallAtK(std::span<const std::string> ranked, std::span<const GoldInstance> gold, int k);
double ReciprocalRank(const std::vector<bool> &relevant);

// Throws ContractError for k < 1 or an empty k list.
InstanceEvalReport EvaluateInstances(std::span<const InstanceEvalInput> inputs,
                                     std::span<const int> ks);

// ---- CNP categories ----

struct CnpPredictedLabel {
  std::string text;
  CnpCategory category = CnpCategory::kSynonyms;
};

struct CnpEvalInput {
  std::string id;
  std::vector<CnpPredictedLabel> predicted;
  std::vector<CnpGoldLabel> gold;
};

struct CnpClassAccuracy {
  size_t predicted = 0;
  size_t correct = 0;
  std::optional<double> accuracy;  // absent when nothing was predicted
};

// Per class: correct / predicted. Predicted CNPs are matched to gold labels
// by case-folded, whitespace-normalized text; those without a gold label
// are not counted.
struct CnpEvalReport {
  std::map<CnpCategory, CnpClassAccuracy> classes;
  size_t unlabeled = 0;
};

CnpEvalReport EvaluateCnp(std::span<const CnpEvalInput> inputs);

// ---- reports ----

struct EvalReport {
  CountEvalReport counts;
  std::optional<InstanceEvalReport> instances;
  std::optional<CnpEvalReport> cnp;
  std::vector<std::string> diagnostics;
};

nlohmann::json ToJson(const EvalReport &report);
// Aligned plain-text tables; Hit@k is shown as a percentage.
std::string FormatReport(const EvalReport &report);

}  // namespace countqa

#endif  // COUNTQA_EVAL_H_
