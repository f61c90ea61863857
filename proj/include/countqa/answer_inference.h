#ifndef COUNTQA_ANSWER_INFERENCE_H_
#define COUNTQA_ANSWER_INFERENCE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "countqa/providers.h"
#include "countqa/types.h"

namespace countqa {

struct WeightedCount {
  double value = 0.0;
  double confidence = 0.0;
  int rank = 0;  // retrieval rank of the source segment, for tie-breaking
};

// Cumulative weight may fall short of half the total by this fraction of
// the total and still count as reaching it (float summation order).
inline constexpr double kWeightTolerance = 1e-12;

// Picks one member of the multiset:
//   MostConfident   highest confidence; ties -> lower value, then lower rank
//   MostFrequent    largest multiplicity (values equal under tolerance are
//                   merged); ties -> higher summed confidence, then lower value
//   Median          ascending order, element (n - 1) / 2
//   WeightedMedian  ascending order, first value whose cumulative confidence
//                   reaches half the total
// Throws ContractError on an empty multiset or a confidence outside (0, 1].
double Consolidate(std::span<const WeightedCount> counts, CountStrategy strategy);

struct InferenceConfig {
  double theta = 0.5;
  CountStrategy strategy = CountStrategy::kWeightedMedian;

  void Validate() const;  // throws ContractError
};

struct InferenceResult {
  std::optional<double> c_pred;
  CountStrategy strategy = CountStrategy::kWeightedMedian;
  // Spans above the threshold that yielded a count, in segment order.
  std::vector<CountCandidate> candidates;
  // Every non-empty span the predictor returned, regardless of threshold.
  std::vector<AnswerSpan> per_segment_spans;
  std::vector<std::string> diagnostics;
  size_t failed_segments = 0;

  Consolidation ToConsolidation() const { return {c_pred, strategy, candidates}; }
};

// Runs the predictor over every segment, keeps non-empty spans with
// confidence > theta, extracts counts and consolidates them. A provider
// failure on one segment is recorded in diagnostics and the segment skipped.
InferenceResult InferAnswer(const CountQuery &query, std::span<const TextSegment> segments,
                            const SpanPredictor &predictor, const InferenceConfig &config);

}  // namespace countqa

#endif  // COUNTQA_ANSWER_INFERENCE_H_
