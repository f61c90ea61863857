#include "countqa/providers.h"

#include <array>
#include <utility>

#include "countqa/errors.h"

namespace countqa {
namespace {

constexpr std::array<std::pair<ProviderKind, std::string_view>, 5> kKinds = {{
    {ProviderKind::kSpanPredictor, "span_predictor"},
    {ProviderKind::kSimilarity, "similarity"},
    {ProviderKind::kEntityRecognizer, "entity_recognizer"},
    {ProviderKind::kEntailment, "entailment"},
    {ProviderKind::kPosTagger, "pos_tagger"},
}};

constexpr std::array<std::pair<PartOfSpeech, std::string_view>, 13> kPos = {{
    {PartOfSpeech::kNoun, "NOUN"},
    {PartOfSpeech::kProperNoun, "PROPN"},
    {PartOfSpeech::kAdjective, "ADJ"},
    {PartOfSpeech::kVerb, "VERB"},
    {PartOfSpeech::kAuxiliary, "AUX"},
    {PartOfSpeech::kDeterminer, "DET"},
    {PartOfSpeech::kPronoun, "PRON"},
    {PartOfSpeech::kConjunction, "CONJ"},
    {PartOfSpeech::kAdposition, "ADP"},
    {PartOfSpeech::kNumeral, "NUM"},
    {PartOfSpeech::kPunctuation, "PUNCT"},
    {PartOfSpeech::kWh, "WH"},
    {PartOfSpeech::kOther, "X"},
}};

}  // namespace

std::string_view ToString(ProviderKind kind) {
  for (const auto &[k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "unknown";
}

ProviderKind ParseProviderKind(std::string_view name) {
  for (const auto &[k, text] : kKinds) {
    if (text == name) return k;
  }
  throw ContractError("unknown provider kind: '" + std::string(name) + "'");
}

std::string_view ToString(PartOfSpeech pos) {
  for (const auto &[p, name] : kPos) {
    if (p == pos) return name;
  }
  return "X";
}

PartOfSpeech ParsePartOfSpeech(std::string_view name) {
  for (const auto &[p, text] : kPos) {
    if (text == name) return p;
  }
  // spaCy-style tags outside the reduced set.
  if (name == "SCONJ" || name == "CCONJ") return PartOfSpeech::kConjunction;
  if (name == "ADV" || name == "PART" || name == "INTJ" || name == "SYM") {
    return PartOfSpeech::kOther;
  }
  throw ContractError("unknown part-of-speech tag: '" + std::string(name) + "'");
}

}  // namespace countqa
