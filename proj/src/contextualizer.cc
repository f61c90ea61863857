#include "countqa/contextualizer.h"

#include <cmath>

#include "countqa/errors.h"

namespace countqa {

size_t SelectRepresentative(std::span<const CountCandidate> candidates, double c_pred) {
  std::optional<size_t> best;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (!SameCount(candidates[i].value, c_pred)) continue;
    if (!best || candidates[i].confidence() > candidates[*best].confidence()) best = i;
  }
  if (!best) {
    throw ContractError("no candidate carries the predicted count " + std::to_string(c_pred));
  }
  return *best;
}

SynonymInterval::SynonymInterval(double c_pred, double alpha)
    : low(c_pred - alpha * c_pred), high(c_pred + alpha * c_pred) {}

bool SynonymInterval::Contains(double value) const {
  return (value >= low || SameCount(value, low)) && (value <= high || SameCount(value, high));
}

bool SynonymInterval::Below(double value) const { return value < low && !SameCount(value, low); }

CnpClassification Classify(std::span<const CountCandidate> candidates, size_t rep_index,
                           double c_pred, double alpha, const SimilarityProvider &similarity) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ContractError("alpha must lie in [0, 1]");
  if (rep_index >= candidates.size()) throw ContractError("representative index out of range");

  CnpClassification out;
  out.alpha = alpha;
  out.cnp_rep = candidates[rep_index];
  const SynonymInterval interval(c_pred, alpha);

  for (size_t i = 0; i < candidates.size(); ++i) {
    if (i == rep_index) continue;
    const CountCandidate &c = candidates[i];
    double sim = 0.0;
    try {
      sim = similarity.Similarity(c.cnp_text, out.cnp_rep.cnp_text);
    } catch (const ProviderError &e) {
      out.diagnostics.push_back("similarity failed for '" + c.cnp_text + "': " + e.what());
      out.incomparables.push_back(c);
      continue;
    }
    if (sim <= 0.0) {
      out.incomparables.push_back(c);
    } else if (interval.Contains(c.value)) {
      out.synonyms.push_back(c);
    } else if (interval.Below(c.value)) {
      out.subgroups.push_back(c);
    } else {
      out.incomparables.push_back(c);
    }
  }
  return out;
}

CnpClassification Contextualize(std::span<const CountCandidate> candidates, double c_pred,
                                double alpha, const SimilarityProvider &similarity) {
  return Classify(candidates, SelectRepresentative(candidates, c_pred), c_pred, alpha, similarity);
}

}  // namespace countqa
