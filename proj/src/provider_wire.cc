#include "countqa/provider_wire.h"

#include "countqa/errors.h"

namespace countqa {
namespace wire {
namespace {

[[noreturn]] void Bad(const std::string &what) {
  throw ProviderError(ProviderError::Reason::kBadResponse, what);
}

void CheckItemError(const Json &out) {
  if (out.is_object() && out.contains("error")) {
    Bad("provider reported an item failure: " +
        (out["error"].is_string() ? out["error"].get<std::string>() : out["error"].dump()));
  }
}

double DecodeUnitNumber(const Json &out, double low, const char *what) {
  CheckItemError(out);
  if (!out.is_number()) Bad(std::string(what) + " output is not a number");
  const double v = out.get<double>();
  if (!(v >= low && v <= 1.0)) Bad(std::string(what) + " output out of range");
  return v;
}

// Input items are validated as contract errors: a malformed request is the
// caller's fault.
std::string InputString(const Json &in, const char *field) {
  if (!in.is_object() || !in.contains(field) || !in[field].is_string()) {
    throw ContractError(std::string("input item needs a string field '") + field + "'");
  }
  return in[field].get<std::string>();
}

std::string InputText(const Json &in) {
  if (!in.is_string()) throw ContractError("input item must be a string");
  return in.get<std::string>();
}

}  // namespace

Json EncodeSpanInput(std::string_view query, std::string_view context) {
  return Json{{"query", query}, {"context", context}};
}

Json EncodeSimilarityInput(std::string_view a, std::string_view b) {
  return Json{{"a", a}, {"b", b}};
}

Json EncodeEntailmentInput(std::string_view premise, std::string_view hypothesis) {
  return Json{{"premise", premise}, {"hypothesis", hypothesis}};
}

Json EncodeTextInput(std::string_view text) { return Json(text); }

Json EncodeSpanOutput(const std::optional<SpanPrediction> &prediction) {
  if (!prediction) return Json(nullptr);
  return Json{{"span", prediction->span}, {"confidence", prediction->confidence}};
}

Json EncodeTags(const std::vector<TaggedToken> &tags) {
  Json out = Json::array();
  for (const TaggedToken &t : tags) {
    out.push_back(Json{{"text", t.text}, {"pos", ToString(t.pos)}, {"root", t.is_root}});
  }
  return out;
}

std::optional<SpanPrediction> DecodeSpanOutput(const Json &out) {
  if (out.is_null()) return std::nullopt;
  CheckItemError(out);
  if (!out.is_object() || !out.contains("span") || !out["span"].is_string() ||
      !out.contains("confidence") || !out["confidence"].is_number()) {
    Bad("span output must be null or {\"span\", \"confidence\"}");
  }
  SpanPrediction p{out["span"].get<std::string>(), out["confidence"].get<double>()};
  if (!(p.confidence >= 0.0 && p.confidence <= 1.0)) Bad("span confidence out of range");
  return p;
}

double DecodeSimilarityOutput(const Json &out) { return DecodeUnitNumber(out, -1.0, "similarity"); }

std::vector<std::string> DecodeEntitiesOutput(const Json &out) {
  CheckItemError(out);
  if (!out.is_array()) Bad("entity output must be an array");
  std::vector<std::string> mentions;
  for (const Json &m : out) {
    if (!m.is_string()) Bad("entity mention must be a string");
    mentions.push_back(m.get<std::string>());
  }
  return mentions;
}

double DecodeEntailmentOutput(const Json &out) { return DecodeUnitNumber(out, 0.0, "entailment"); }

std::vector<TaggedToken> DecodeTagsOutput(const Json &out) {
  CheckItemError(out);
  if (!out.is_array()) Bad("tagger output must be an array");
  std::vector<TaggedToken> tags;
  for (const Json &t : out) {
    if (!t.is_object() || !t.contains("text") || !t["text"].is_string() || !t.contains("pos") ||
        !t["pos"].is_string()) {
      Bad("tagged token needs string fields 'text' and 'pos'");
    }
    TaggedToken tok;
    tok.text = t["text"].get<std::string>();
    try {
      tok.pos = ParsePartOfSpeech(t["pos"].get<std::string>());
    } catch (const ContractError &e) {
      Bad(e.what());
    }
    tok.is_root = t.value("root", false);
    tags.push_back(std::move(tok));
  }
  return tags;
}

WireReply HandleWireRequest(const JsonBackend &backend, ProviderKind expected_kind,
                            const std::string &request_body) {
  Json request;
  try {
    request = Json::parse(request_body);
  } catch (const Json::parse_error &e) {
    return {400, Json{{"error", std::string("body is not JSON: ") + e.what()}}};
  }
  if (!request.is_object() || !request.contains("inputs") || !request["inputs"].is_array()) {
    return {400, Json{{"error", "body needs an 'inputs' array"}}};
  }
  if (request.contains("kind") &&
      (!request["kind"].is_string() ||
       request["kind"].get<std::string>() != ToString(expected_kind))) {
    return {400, Json{{"error", "kind does not match this endpoint"}}};
  }
  try {
    std::vector<Json> inputs = request["inputs"].get<std::vector<Json>>();
    return {200, Json{{"outputs", backend.Invoke(expected_kind, inputs)}}};
  } catch (const ContractError &e) {
    return {400, Json{{"error", e.what()}}};
  } catch (const ProviderError &e) {
    return {502, Json{{"error", e.what()}}};
  }
}

}  // namespace wire

namespace {

template <typename T>
const T &Require(const std::shared_ptr<const T> &p, ProviderKind kind) {
  if (!p) {
    throw ProviderError(ProviderError::Reason::kUnbound,
                        "no " + std::string(ToString(kind)) + " provider is bound");
  }
  return *p;
}

Json InvokeOne(const JsonBackend &backend, ProviderKind kind, Json input) {
  std::vector<Json> outputs = backend.Invoke(kind, {std::move(input)});
  if (outputs.size() != 1) {
    throw ProviderError(ProviderError::Reason::kBadResponse, "expected exactly one output");
  }
  return std::move(outputs.front());
}

}  // namespace

std::vector<Json> LocalBackend::Invoke(ProviderKind kind, const std::vector<Json> &inputs) const {
  std::vector<Json> outputs;
  outputs.reserve(inputs.size());
  for (const Json &in : inputs) {
    switch (kind) {
      case ProviderKind::kSpanPredictor:
        outputs.push_back(wire::EncodeSpanOutput(
            Require(providers_.count_predictor, kind)
                .PredictSpan(wire::InputString(in, "query"), wire::InputString(in, "context"))));
        break;
      case ProviderKind::kSimilarity:
        outputs.push_back(Require(providers_.similarity, kind)
                              .Similarity(wire::InputString(in, "a"), wire::InputString(in, "b")));
        break;
      case ProviderKind::kEntityRecognizer:
        outputs.push_back(Require(providers_.ner, kind).RecognizeEntities(wire::InputText(in)));
        break;
      case ProviderKind::kEntailment:
        outputs.push_back(Require(providers_.entailment, kind)
                              .Entail(wire::InputString(in, "premise"),
                                      wire::InputString(in, "hypothesis")));
        break;
      case ProviderKind::kPosTagger:
        outputs.push_back(wire::EncodeTags(Require(providers_.pos_tagger, kind).Tag(wire::InputText(in))));
        break;
    }
  }
  return outputs;
}

ProviderDescriptor LocalBackend::Describe(ProviderKind kind) const {
  switch (kind) {
    case ProviderKind::kSpanPredictor:
      return Require(providers_.count_predictor, kind).Describe();
    case ProviderKind::kSimilarity:
      return Require(providers_.similarity, kind).Describe();
    case ProviderKind::kEntityRecognizer:
      return Require(providers_.ner, kind).Describe();
    case ProviderKind::kEntailment:
      return Require(providers_.entailment, kind).Describe();
    case ProviderKind::kPosTagger:
      return Require(providers_.pos_tagger, kind).Describe();
  }
  return {kind, "unknown", std::nullopt};
}

std::optional<SpanPrediction> JsonSpanPredictor::PredictSpan(std::string_view query,
                                                             std::string_view segment_text) const {
  return wire::DecodeSpanOutput(InvokeOne(*backend_, ProviderKind::kSpanPredictor,
                                          wire::EncodeSpanInput(query, segment_text)));
}

ProviderDescriptor JsonSpanPredictor::Describe() const {
  return backend_->Describe(ProviderKind::kSpanPredictor);
}

double JsonSimilarity::Similarity(std::string_view a, std::string_view b) const {
  return wire::DecodeSimilarityOutput(
      InvokeOne(*backend_, ProviderKind::kSimilarity, wire::EncodeSimilarityInput(a, b)));
}

ProviderDescriptor JsonSimilarity::Describe() const {
  return backend_->Describe(ProviderKind::kSimilarity);
}

std::vector<std::string> JsonEntityRecognizer::RecognizeEntities(std::string_view text) const {
  return wire::DecodeEntitiesOutput(
      InvokeOne(*backend_, ProviderKind::kEntityRecognizer, wire::EncodeTextInput(text)));
}

ProviderDescriptor JsonEntityRecognizer::Describe() const {
  return backend_->Describe(ProviderKind::kEntityRecognizer);
}

double JsonEntailment::Entail(std::string_view premise, std::string_view hypothesis) const {
  return wire::DecodeEntailmentOutput(InvokeOne(*backend_, ProviderKind::kEntailment,
                                                wire::EncodeEntailmentInput(premise, hypothesis)));
}

ProviderDescriptor JsonEntailment::Describe() const {
  return backend_->Describe(ProviderKind::kEntailment);
}

std::vector<TaggedToken> JsonPosTagger::Tag(std::string_view text) const {
  return wire::DecodeTagsOutput(
      InvokeOne(*backend_, ProviderKind::kPosTagger, wire::EncodeTextInput(text)));
}

ProviderDescriptor JsonPosTagger::Describe() const {
  return backend_->Describe(ProviderKind::kPosTagger);
}

}  // namespace countqa
