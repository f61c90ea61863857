#ifndef COUNTQA_CONTEXTUALIZER_H_
#define COUNTQA_CONTEXTUALIZER_H_

#include <span>
#include <string>
#include <vector>

#include "countqa/providers.h"
#include "countqa/types.h"

namespace countqa {

struct CnpClassification {
  CountCandidate cnp_rep;
  std::vector<CountCandidate> synonyms;
  std::vector<CountCandidate> subgroups;
  std::vector<CountCandidate> incomparables;
  double alpha = 0.3;
  std::vector<std::string> diagnostics;
};

// Index of the highest-confidence candidate whose value equals c_pred
// (first one on ties). Throws ContractError when none matches.
size_t SelectRepresentative(std::span<const CountCandidate> candidates, double c_pred);

// The synonym interval [c_pred - alpha * c_pred, c_pred + alpha * c_pred],
// inclusive on both ends.
struct SynonymInterval {
  double low = 0.0;
  double high = 0.0;

  SynonymInterval(double c_pred, double alpha);
  bool Contains(double value) const;
  bool Below(double value) const;
};

// Classifies every candidate except the representative:
//   similarity to the representative <= 0  -> Incomparables
//   count inside the synonym interval       -> Synonyms
//   count below the interval                -> Subgroups
//   otherwise                               -> Incomparables
// Similarity is computed over the whole CNP text. If the provider fails for
// a candidate it goes to Incomparables and a diagnostic is recorded.
// Throws ContractError for alpha outside [0, 1] or a bad rep_index.
CnpClassification Classify(std::span<const CountCandidate> candidates, size_t rep_index,
                           double c_pred, double alpha, const SimilarityProvider &similarity);

// SelectRepresentative followed by Classify.
CnpClassification Contextualize(std::span<const CountCandidate> candidates, double c_pred,
                                double alpha, const SimilarityProvider &similarity);

}  // namespace countqa

#endif  // COUNTQA_CONTEXTUALIZER_H_
