#include "countqa/answer_inference.h"

#include <algorithm>
#include <numeric>

#include "countqa/errors.h"
#include "countqa/quantity_parser.h"

namespace countqa {
namespace {

double MostConfident(std::span<const WeightedCount> counts) {
  const WeightedCount *best = &counts.front();
  for (const WeightedCount &c : counts) {
    if (c.confidence > best->confidence ||
        (c.confidence == best->confidence &&
         (c.value < best->value || (c.value == best->value && c.rank < best->rank)))) {
      best = &c;
    }
  }
  return best->value;
}

double MostFrequent(std::vector<WeightedCount> sorted) {
  struct Group {
    double value;
    size_t count;
    double weight;
  };
  std::vector<Group> groups;
  for (const WeightedCount &c : sorted) {
    if (!groups.empty() && SameCount(groups.back().value, c.value)) {
      ++groups.back().count;
      groups.back().weight += c.confidence;
    } else {
      groups.push_back({c.value, 1, c.confidence});
    }
  }
  // Groups are in ascending value order, so keeping the first of equals
  // prefers the lower value.
  const Group *best = &groups.front();
  for (const Group &g : groups) {
    if (g.count > best->count || (g.count == best->count && g.weight > best->weight)) best = &g;
  }
  return best->value;
}

double WeightedMedian(const std::vector<WeightedCount> &sorted) {
  double total = 0.0;
  for (const WeightedCount &c : sorted) total += c.confidence;
  const double half = total / 2.0;
  double cumulative = 0.0;
  for (const WeightedCount &c : sorted) {
    cumulative += c.confidence;
    if (cumulative >= half - kWeightTolerance * total) return c.value;
  }
  return sorted.back().value;
}

}  // namespace

double Consolidate(std::span<const WeightedCount> counts, CountStrategy strategy) {
  if (counts.empty()) throw ContractError("cannot consolidate an empty candidate set");
  for (const WeightedCount &c : counts) {
    if (!(c.confidence > 0.0 && c.confidence <= 1.0)) {
      throw ContractError("candidate confidence must lie in (0, 1]");
    }
  }
  if (strategy == CountStrategy::kMostConfident) return MostConfident(counts);

  std::vector<WeightedCount> sorted(counts.begin(), counts.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const WeightedCount &a, const WeightedCount &b) { return a.value < b.value; });
  switch (strategy) {
    case CountStrategy::kMostFrequent:
      return MostFrequent(std::move(sorted));
    case CountStrategy::kMedian:
      return sorted[(sorted.size() - 1) / 2].value;
    case CountStrategy::kWeightedMedian:
      return WeightedMedian(sorted);
    case CountStrategy::kMostConfident:
      break;
  }
  return MostConfident(counts);
}

void InferenceConfig::Validate() const {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ContractError("theta must lie in [0, 1]");
}

InferenceResult InferAnswer(const CountQuery &query, std::span<const TextSegment> segments,
                            const SpanPredictor &predictor, const InferenceConfig &config) {
  config.Validate();
  InferenceResult result;
  result.strategy = config.strategy;

  for (const TextSegment &segment : segments) {
    std::optional<SpanPrediction> prediction;
    try {
      prediction = predictor.PredictSpan(query.text, segment.text);
    } catch (const ProviderError &e) {
      ++result.failed_segments;
      result.diagnostics.push_back("segment " + segment.id + ": span prediction failed: " + e.what());
      continue;
    }
    if (!prediction || prediction->span.empty()) continue;
    if (segment.text.find(prediction->span) == std::string::npos) {
      ++result.failed_segments;
      result.diagnostics.push_back("segment " + segment.id +
                                   ": predicted span is not a substring of the segment");
      continue;
    }
    AnswerSpan span{segment.id, prediction->span, prediction->confidence};
    result.per_segment_spans.push_back(span);
    if (!(span.confidence > config.theta)) continue;

    auto parsed = ExtractCount(span.span);
    if (!parsed) continue;
    result.candidates.push_back(MakeCountCandidate(std::move(span), parsed->value, segment.rank));
  }

  if (!segments.empty() && result.failed_segments == segments.size()) {
    result.diagnostics.push_back("span prediction failed on every segment");
  }
  if (!result.candidates.empty()) {
    std::vector<WeightedCount> weighted;
    weighted.reserve(result.candidates.size());
    for (const CountCandidate &c : result.candidates) {
      weighted.push_back({c.value, c.confidence(), c.segment_rank});
    }
    result.c_pred = Consolidate(weighted, config.strategy);
  }
  return result;
}

}  // namespace countqa
