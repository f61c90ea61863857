#ifndef COUNTQA_EXPLAINER_H_
#define COUNTQA_EXPLAINER_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "countqa/providers.h"
#include "countqa/types.h"

namespace countqa {

// Replaces the first "how many" (any case) with "which", or prepends
// "which " when the query has none.
std::string RewriteQuery(std::string_view query_text);

// Index key for an instance mention: case-folded, whitespace-normalized,
// trailing possessive ('s, ’s, or a bare ' after s) removed.
std::string NormalizeInstance(std::string_view surface);

struct InstanceEntry {
  std::string surface;  // first mention seen, whitespace-normalized, possessive removed
  std::vector<AnswerSpan> postings;  // one per segment, in segment order
};

// Mentions harvested from one segment whose span passed the threshold.
struct SegmentHarvest {
  std::string segment_id;
  int rank = 0;
  AnswerSpan span;
  std::vector<std::string> keys;  // distinct instance keys in mention order
};

struct InstanceIndex {
  std::map<std::string, InstanceEntry> entries;  // by NormalizeInstance key
  std::vector<SegmentHarvest> harvests;
  size_t num_segments = 0;
  size_t failed_segments = 0;
  std::vector<std::string> diagnostics;
};

// Predicts one span per segment with the rewritten query, keeps spans with
// confidence > theta and records every entity the recognizer finds in them.
// A mention repeated within one span yields a single posting. Provider
// failures skip the segment and leave a diagnostic.
InstanceIndex BuildInstanceIndex(std::string_view rewritten_query,
                                 std::span<const TextSegment> segments,
                                 const SpanPredictor &predictor, const EntityRecognizer &ner,
                                 double theta);

struct RankedInstance {
  std::string instance;
  double score = 0.0;
  size_t postings = 0;

  bool operator==(const RankedInstance &) const = default;
};

struct RankedInstances {
  InstanceStrategy strategy = InstanceStrategy::kTypeCompatibility;
  std::vector<RankedInstance> items;
  size_t entailment_calls = 0;
  size_t failed_entailment_calls = 0;
  std::vector<std::string> diagnostics;
};

// The premise for a type-compatibility check: the sentence of segment_text
// holding the first character of span, widened to the end of the last
// sentence the span touches. Falls back to the span itself when it does not
// occur in the segment.
std::string LocateSentence(std::string_view segment_text, std::string_view span);

// Scores every indexed instance:
//   NoConsolidation    instances of the segment with the most confident span
//                      (lower rank on ties), scored by that confidence, in
//                      mention order
//   ContextFrequency   postings / num_segments
//   SummedConfidence   mean span confidence over postings
//   TypeCompatibility  mean entailment of "<instance> is a <answer_type>"
//                      given the posting's sentence; a failed call counts 0
// Other than NoConsolidation, items are sorted by score descending, then
// posting count descending, then instance key.
// TypeCompatibility throws ContractError without an answer type and
// ProviderError(kUnbound) without an entailment provider.
RankedInstances ScoreInstances(const InstanceIndex &index, InstanceStrategy strategy,
                               const EntailmentProvider *entailment,
                               const std::optional<std::string> &answer_type,
                               std::span<const TextSegment> segments);

}  // namespace countqa

#endif  // COUNTQA_EXPLAINER_H_
