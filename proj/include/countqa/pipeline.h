#ifndef COUNTQA_PIPELINE_H_
#define COUNTQA_PIPELINE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "countqa/dataset_io.h"
#include "countqa/eval.h"
#include "countqa/providers.h"

namespace countqa {

// Throws ContractError when a threshold or alpha lies outside [0, 1].
void Validate(const PredictionConfig &config);

// Throws ProviderError(kUnbound) naming the first provider the config needs
// but the set lacks. TypeCompatibility needs an entailment provider.
void CheckBindings(const ProviderSet &providers, const PredictionConfig &config);

struct QueryRun {
  PredictionRecord record;
  bool inference_failed = false;    // every segment's span prediction failed
  bool explanation_failed = false;  // instance harvesting or entailment failed throughout
};

// Query analysis, answer inference, contextualization and explanation for
// one query. Provider failures are isolated per call and reported in the
// record's diagnostics. Stateless; safe to call concurrently.
class Pipeline {
 public:
  // Validates the defaults and bindings.
  Pipeline(ProviderSet providers, PredictionConfig defaults);

  QueryRun Run(std::string_view id, std::string_view query, std::span<const TextSegment> segments,
               const PredictionConfig &config) const;
  QueryRun Run(std::string_view id, std::string_view query,
               std::span<const TextSegment> segments) const {
    return Run(id, query, segments, defaults_);
  }

  // Runs every record on up to `jobs` threads; the result is sorted by id.
  std::vector<QueryRun> RunAll(const std::vector<DatasetRecord> &records,
                                       size_t jobs = 1) const;

  const PredictionConfig &defaults() const { return defaults_; }
  const ProviderSet &providers() const { return providers_; }

 private:
  ProviderSet providers_;
  PredictionConfig defaults_;
};

// Aligns predictions with dataset golds by query id and evaluates counts,
// instances (for queries with gold instances) and CNP categories (for
// queries with labels). Unmatched ids on either side become diagnostics;
// dataset queries without a prediction count as unanswered.
EvalReport EvaluatePredictions(const std::vector<PredictionRecord> &predictions,
                               const std::vector<DatasetRecord> &dataset, std::span<const int> ks);

}  // namespace countqa

#endif  // COUNTQA_PIPELINE_H_
