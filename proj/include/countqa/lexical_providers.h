#ifndef COUNTQA_LEXICAL_PROVIDERS_H_
#define COUNTQA_LEXICAL_PROVIDERS_H_

#include "countqa/providers.h"

namespace countqa {

// Deterministic, model-free reference providers. They stand in for the
// neural models in offline runs and tests; none of them tries to be good.

// Picks the sentence with the largest content-token overlap with the query
// and returns a window of up to six tokens around an anchor token. Count
// questions anchor on the first numeric token; "which" questions anchor on
// the first capitalized token that does not open the sentence. Confidence is
// shared content tokens / query content tokens.
class LexicalSpanPredictor : public SpanPredictor {
 public:
  static constexpr size_t kWindow = 6;

  std::optional<SpanPrediction> PredictSpan(std::string_view query,
                                            std::string_view segment_text) const override;
  ProviderDescriptor Describe() const override;
};

// 2J - 1 where J is the Jaccard overlap of stemmed content tokens.
class LexicalSimilarity : public SimilarityProvider {
 public:
  double Similarity(std::string_view a, std::string_view b) const override;
  ProviderDescriptor Describe() const override;
};

// Maximal runs of capitalized tokens, allowing "of"/"the" inside a run.
// Punctuation ends a run; a sentence-initial stopword ("The", "In") is
// dropped from the front of a run.
class LexicalEntityRecognizer : public EntityRecognizer {
 public:
  std::vector<std::string> RecognizeEntities(std::string_view text) const override;
  ProviderDescriptor Describe() const override;
};

// 1.0 when the hypothesis' head noun (stemmed) occurs in the premise,
// otherwise 0.25.
class LexicalEntailment : public EntailmentProvider {
 public:
  static constexpr double kMiss = 0.25;

  double Entail(std::string_view premise, std::string_view hypothesis) const override;
  ProviderDescriptor Describe() const override;
};

// Closed-class lexicons plus a small verb list. The run of content words
// after "how many" (or at the start of a telegraphic query) is tagged
// adjectives + noun; remaining content words are proper nouns.
class LexicalPosTagger : public PosTagger {
 public:
  std::vector<TaggedToken> Tag(std::string_view text) const override;
  ProviderDescriptor Describe() const override;
};

ProviderSet MakeLexicalProviders();

}  // namespace countqa

#endif  // COUNTQA_LEXICAL_PROVIDERS_H_
