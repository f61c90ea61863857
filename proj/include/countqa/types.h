#ifndef COUNTQA_TYPES_H_
#define COUNTQA_TYPES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace countqa {

// Counts are reals ("17.0" stays 17.0) compared with this relative tolerance.
inline constexpr double kCountTolerance = 1e-9;

bool SameCount(double a, double b);

struct CountQuery {
  std::string id;
  std::string text;
  std::optional<std::string> answer_type;
  std::vector<std::string> entities;
  std::optional<std::string> relation;
  std::vector<std::string> context_terms;

  bool operator==(const CountQuery &) const = default;
};

struct TextSegment {
  std::string id;
  int rank = 1;
  std::string text;

  bool operator==(const TextSegment &) const = default;
};

struct AnswerSpan {
  std::string segment_id;
  std::string span;
  double confidence = 0.0;

  bool operator==(const AnswerSpan &) const = default;
};

// A span whose text yielded a usable count. cnp_text is the whole span, kept
// as the count-modified noun phrase.
struct CountCandidate {
  AnswerSpan answer_span;
  double value = 0.0;
  std::string cnp_text;
  int segment_rank = 0;

  double confidence() const { return answer_span.confidence; }
  bool operator==(const CountCandidate &) const = default;
};

// Throws ContractError when value lies in [0, 1).
CountCandidate MakeCountCandidate(AnswerSpan span, double value,
                                  int segment_rank = 0);

enum class CountStrategy { kMostConfident, kMostFrequent, kMedian, kWeightedMedian };

struct Consolidation {
  std::optional<double> c_pred;
  CountStrategy strategy = CountStrategy::kWeightedMedian;
  std::vector<CountCandidate> candidates;
};

enum class GoldSource { kKG, kSnippet, kNoDirectAnswer };

struct GoldInstance {
  std::string canonical;
  std::vector<std::string> aliases;

  bool operator==(const GoldInstance &) const = default;
};

enum class CnpCategory { kSynonyms, kSubgroups, kIncomparables };

struct CnpGoldLabel {
  std::string text;
  CnpCategory label = CnpCategory::kSynonyms;

  bool operator==(const CnpGoldLabel &) const = default;
};

struct GoldAnnotation {
  std::string query_id;
  std::optional<double> gold_count;
  GoldSource source = GoldSource::kNoDirectAnswer;
  std::vector<GoldInstance> gold_instances;
  std::optional<std::vector<CnpGoldLabel>> category_labels;

  bool operator==(const GoldAnnotation &) const = default;
};

enum class InstanceStrategy {
  kNoConsolidation,
  kContextFrequency,
  kSummedConfidence,
  kTypeCompatibility
};

// Wire names for the enums. Parse* throw ContractError on unknown names and
// accept the names produced by ToString plus snake_case variants.
std::string_view ToString(CountStrategy s);
std::string_view ToString(InstanceStrategy s);
std::string_view ToString(GoldSource s);
std::string_view ToString(CnpCategory c);
CountStrategy ParseCountStrategy(std::string_view name);
InstanceStrategy ParseInstanceStrategy(std::string_view name);
GoldSource ParseGoldSource(std::string_view name);
CnpCategory ParseCnpCategory(std::string_view name);

}  // namespace countqa

#endif  // COUNTQA_TYPES_H_
