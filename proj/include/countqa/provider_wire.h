#ifndef COUNTQA_PROVIDER_WIRE_H_
#define COUNTQA_PROVIDER_WIRE_H_

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "countqa/providers.h"

namespace countqa {

// JSON form of provider calls, shared by the HTTP protocol and the
// record/replay cache.
//
//   kind               input item                          output item
//   span_predictor     {"query", "context"}                {"span", "confidence"} or null
//   similarity         {"a", "b"}                          number
//   entity_recognizer  "text"                              ["mention", ...]
//   entailment         {"premise", "hypothesis"}           number
//   pos_tagger         "text"                              [{"text", "pos", "root"}, ...]
//
// A request body is {"kind": <kind>, "inputs": [item, ...]} and the response
// {"outputs": [item, ...]} in the same order. An output item of the form
// {"error": "..."} marks a failed item.

using Json = nlohmann::json;

class JsonBackend {
 public:
  virtual ~JsonBackend() = default;
  // Returns exactly one output per input. Throws ProviderError.
  virtual std::vector<Json> Invoke(ProviderKind kind, const std::vector<Json> &inputs) const = 0;
  virtual ProviderDescriptor Describe(ProviderKind kind) const = 0;
};

namespace wire {

Json EncodeSpanInput(std::string_view query, std::string_view context);
Json EncodeSimilarityInput(std::string_view a, std::string_view b);
Json EncodeEntailmentInput(std::string_view premise, std::string_view hypothesis);
Json EncodeTextInput(std::string_view text);

Json EncodeSpanOutput(const std::optional<SpanPrediction> &prediction);
Json EncodeTags(const std::vector<TaggedToken> &tags);

// Decoders validate shape and ranges and throw ProviderError(kBadResponse).
std::optional<SpanPrediction> DecodeSpanOutput(const Json &out);
double DecodeSimilarityOutput(const Json &out);
std::vector<std::string> DecodeEntitiesOutput(const Json &out);
double DecodeEntailmentOutput(const Json &out);
std::vector<TaggedToken> DecodeTagsOutput(const Json &out);

// Validates the request envelope and answers it with backend. Any error
// becomes {"error": ...} with the status code to send (400 for a bad
// request, 502 when the backend fails).
struct WireReply {
  int status = 200;
  Json body;
};
WireReply HandleWireRequest(const JsonBackend &backend, ProviderKind expected_kind,
                            const std::string &request_body);

}  // namespace wire

// Serves JSON calls from typed in-process providers. Unbound kinds raise
// ProviderError(kUnbound).
class LocalBackend : public JsonBackend {
 public:
  explicit LocalBackend(ProviderSet providers) : providers_(std::move(providers)) {}

  std::vector<Json> Invoke(ProviderKind kind, const std::vector<Json> &inputs) const override;
  ProviderDescriptor Describe(ProviderKind kind) const override;

 private:
  ProviderSet providers_;
};

// Typed providers that forward to a JsonBackend one item at a time.
class JsonSpanPredictor : public SpanPredictor {
 public:
  explicit JsonSpanPredictor(std::shared_ptr<const JsonBackend> backend)
      : backend_(std::move(backend)) {}
  std::optional<SpanPrediction> PredictSpan(std::string_view query,
                                            std::string_view segment_text) const override;
  ProviderDescriptor Describe() const override;

 private:
  std::shared_ptr<const JsonBackend> backend_;
};

class JsonSimilarity : public SimilarityProvider {
 public:
  explicit JsonSimilarity(std::shared_ptr<const JsonBackend> backend)
      : backend_(std::move(backend)) {}
  double Similarity(std::string_view a, std::string_view b) const override;
  ProviderDescriptor Describe() const override;

 private:
  std::shared_ptr<const JsonBackend> backend_;
};

class JsonEntityRecognizer : public EntityRecognizer {
 public:
  explicit JsonEntityRecognizer(std::shared_ptr<const JsonBackend> backend)
      : backend_(std::move(backend)) {}
  std::vector<std::string> RecognizeEntities(std::string_view text) const override;
  ProviderDescriptor Describe() const override;

 private:
  std::shared_ptr<const JsonBackend> backend_;
};

class JsonEntailment : public EntailmentProvider {
 public:
  explicit JsonEntailment(std::shared_ptr<const JsonBackend> backend)
      : backend_(std::move(backend)) {}
  double Entail(std::string_view premise, std::string_view hypothesis) const override;
  ProviderDescriptor Describe() const override;

 private:
  std::shared_ptr<const JsonBackend> backend_;
};

class JsonPosTagger : public PosTagger {
 public:
  explicit JsonPosTagger(std::shared_ptr<const JsonBackend> backend)
      : backend_(std::move(backend)) {}
  std::vector<TaggedToken> Tag(std::string_view text) const override;
  ProviderDescriptor Describe() const override;

 private:
  std::shared_ptr<const JsonBackend> backend_;
};

}  // namespace countqa

#endif  // COUNTQA_PROVIDER_WIRE_H_
