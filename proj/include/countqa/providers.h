#ifndef COUNTQA_PROVIDERS_H_
#define COUNTQA_PROVIDERS_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace countqa {

// Model-backed functions the pipeline consumes. Implementations must be safe
// for concurrent calls. Failures are reported as ProviderError; "no answer"
// is a normal return value.

enum class ProviderKind { kSpanPredictor, kSimilarity, kEntityRecognizer, kEntailment, kPosTagger };

std::string_view ToString(ProviderKind kind);
ProviderKind ParseProviderKind(std::string_view name);

struct ProviderDescriptor {
  ProviderKind kind = ProviderKind::kSpanPredictor;
  std::string name;
  std::optional<std::string> endpoint;
};

struct SpanPrediction {
  std::string span;
  double confidence = 0.0;

  bool operator==(const SpanPrediction &) const = default;
};

class SpanPredictor {
 public:
  virtual ~SpanPredictor() = default;
  // Returns a contiguous substring of segment_text, or nothing.
  virtual std::optional<SpanPrediction> PredictSpan(std::string_view query,
                                                    std::string_view segment_text) const = 0;
  virtual ProviderDescriptor Describe() const = 0;
};

class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  // Symmetric, in [-1, 1], Similarity(x, x) == 1.
  virtual double Similarity(std::string_view a, std::string_view b) const = 0;
  virtual ProviderDescriptor Describe() const = 0;
};

class EntityRecognizer {
 public:
  virtual ~EntityRecognizer() = default;
  virtual std::vector<std::string> RecognizeEntities(std::string_view text) const = 0;
  virtual ProviderDescriptor Describe() const = 0;
};

class EntailmentProvider {
 public:
  virtual ~EntailmentProvider() = default;
  // Probability in [0, 1] that the premise entails the hypothesis.
  virtual double Entail(std::string_view premise, std::string_view hypothesis) const = 0;
  virtual ProviderDescriptor Describe() const = 0;
};

enum class PartOfSpeech {
  kNoun,
  kProperNoun,
  kAdjective,
  kVerb,
  kAuxiliary,
  kDeterminer,
  kPronoun,
  kConjunction,
  kAdposition,
  kNumeral,
  kPunctuation,
  kWh,  // interrogative words and the "how many" trigger
  kOther
};

std::string_view ToString(PartOfSpeech pos);
PartOfSpeech ParsePartOfSpeech(std::string_view name);

struct TaggedToken {
  std::string text;
  PartOfSpeech pos = PartOfSpeech::kOther;
  bool is_root = false;

  bool operator==(const TaggedToken &) const = default;
};

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::vector<TaggedToken> Tag(std::string_view text) const = 0;
  virtual ProviderDescriptor Describe() const = 0;
};

// One implementation per kind per pipeline run. The two span predictors may
// be bound to different models; instance_predictor falls back to
// count_predictor when unset. Any member may be null (unbound).
struct ProviderSet {
  std::shared_ptr<const SpanPredictor> count_predictor;
  std::shared_ptr<const SpanPredictor> instance_predictor;
  std::shared_ptr<const SimilarityProvider> similarity;
  std::shared_ptr<const EntityRecognizer> ner;
  std::shared_ptr<const EntailmentProvider> entailment;
  std::shared_ptr<const PosTagger> pos_tagger;

  const SpanPredictor *InstancePredictor() const {
    return instance_predictor ? instance_predictor.get() : count_predictor.get();
  }
};

}  // namespace countqa

#endif  // COUNTQA_PROVIDERS_H_
