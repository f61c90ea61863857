#include "countqa/query_components.h"

#include <string>
#include <vector>

#include "countqa/errors.h"
#include "countqa/lexical_providers.h"
#include "countqa/text_util.h"

namespace countqa {

CountQuery DeriveQueryComponents(std::string_view query_text, const PosTagger *tagger,
                                 std::string_view id) {
  CountQuery query;
  query.id = std::string(id);
  query.text = text::NormalizeSpace(query_text);
  if (query.text.empty()) throw ContractError("query text is empty");

  static const LexicalPosTagger kFallback;
  const std::vector<TaggedToken> tokens = (tagger ? *tagger : kFallback).Tag(query.text);
  std::vector<bool> used(tokens.size(), false);

  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].pos != PartOfSpeech::kNoun) continue;
    size_t first = i;
    while (first > 0 && tokens[first - 1].pos == PartOfSpeech::kAdjective) --first;
    std::string phrase;
    for (size_t k = first; k <= i; ++k) {
      if (!phrase.empty()) phrase.push_back(' ');
      phrase += tokens[k].text;
      used[k] = true;
    }
    query.answer_type = phrase;
    break;
  }

  for (size_t i = 0; i < tokens.size();) {
    if (tokens[i].pos != PartOfSpeech::kProperNoun || used[i]) {
      ++i;
      continue;
    }
    std::string entity;
    while (i < tokens.size() && tokens[i].pos == PartOfSpeech::kProperNoun && !used[i]) {
      if (!entity.empty()) entity.push_back(' ');
      entity += tokens[i].text;
      used[i] = true;
      ++i;
    }
    query.entities.push_back(entity);
  }

  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].is_root && tokens[i].pos == PartOfSpeech::kVerb && !used[i]) {
      query.relation = tokens[i].text;
      used[i] = true;
      break;
    }
  }

  for (size_t i = 0; i < tokens.size(); ++i) {
    if (used[i]) continue;
    switch (tokens[i].pos) {
      case PartOfSpeech::kConjunction:
      case PartOfSpeech::kDeterminer:
      case PartOfSpeech::kAuxiliary:
      case PartOfSpeech::kPronoun:
      case PartOfSpeech::kPunctuation:
      case PartOfSpeech::kWh:
        break;
      default:
        query.context_terms.push_back(tokens[i].text);
    }
  }
  return query;
}

}  // namespace countqa
