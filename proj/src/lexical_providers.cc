#include "countqa/lexical_providers.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <unordered_set>

#include "countqa/errors.h"
#include "countqa/text_util.h"

namespace countqa {
namespace {

using text::Token;

std::set<std::string> StemSet(std::string_view s) {
  auto stems = text::ContentStems(s);
  return {stems.begin(), stems.end()};
}

bool IsNumberWord(std::string_view lower) {
  static const std::unordered_set<std::string_view> words = {
      "one",      "two",      "three",     "four",     "five",     "six",     "seven",
      "eight",    "nine",     "ten",       "eleven",   "twelve",   "thirteen", "fourteen",
      "fifteen",  "sixteen",  "seventeen", "eighteen", "nineteen", "twenty",  "thirty",
      "forty",    "fifty",    "sixty",     "seventy",  "eighty",   "ninety",  "hundred",
      "thousand", "million",  "billion",   "dozen"};
  if (words.count(lower) > 0) return true;
  // Hyphenated tens: "twenty-one".
  const size_t dash = lower.find('-');
  return dash != std::string_view::npos && words.count(lower.substr(0, dash)) > 0;
}

bool IsNumericToken(std::string_view core) {
  return text::HasDigit(core) || IsNumberWord(text::AsciiLower(core));
}

bool AsksWhich(std::string_view query) {
  const std::string lower = text::AsciiLower(text::NormalizeSpace(query));
  return lower.starts_with("which ") || lower.find(" which ") != std::string::npos;
}

}  // namespace

std::optional<SpanPrediction> LexicalSpanPredictor::PredictSpan(
    std::string_view query, std::string_view segment_text) const {
  if (text::NormalizeSpace(query).empty() || text::NormalizeSpace(segment_text).empty()) {
    throw ContractError("span prediction needs a non-empty query and segment");
  }
  const std::set<std::string> query_stems = StemSet(query);
  if (query_stems.empty()) return std::nullopt;

  size_t best_overlap = 0;
  text::Sentence best{};
  for (const text::Sentence &s : text::SplitSentences(segment_text)) {
    const std::set<std::string> stems = StemSet(segment_text.substr(s.begin, s.end - s.begin));
    size_t overlap = 0;
    for (const std::string &q : query_stems) overlap += stems.count(q);
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best = s;
    }
  }
  if (best_overlap == 0) return std::nullopt;

  const std::string_view sentence = segment_text.substr(best.begin, best.end - best.begin);
  std::vector<Token> tokens = text::Tokenize(sentence);
  std::erase_if(tokens, [](const Token &t) { return !t.HasCore(); });
  if (tokens.empty()) return std::nullopt;

  auto first_numeric = [&]() -> std::optional<size_t> {
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (IsNumericToken(tokens[i].Core(sentence))) return i;
    }
    return std::nullopt;
  };
  auto first_capitalized = [&](size_t from) -> std::optional<size_t> {
    for (size_t i = from; i < tokens.size(); ++i) {
      if (text::StartsWithUpper(tokens[i].Core(sentence))) return i;
    }
    return std::nullopt;
  };
  std::optional<size_t> anchor;
  if (AsksWhich(query)) {
    anchor = first_capitalized(1);
    if (!anchor) anchor = first_capitalized(0);
    if (!anchor) anchor = first_numeric();
  } else {
    anchor = first_numeric();
    if (!anchor) anchor = first_capitalized(1);
    if (!anchor) anchor = first_capitalized(0);
  }
  if (!anchor) return std::nullopt;

  const size_t n = tokens.size();
  size_t start = *anchor >= 2 ? *anchor - 2 : 0;
  const size_t end = std::min(n, start + kWindow);
  start = end >= kWindow ? end - kWindow : 0;

  const size_t begin = best.begin + tokens[start].core_begin;
  const size_t stop = best.begin + tokens[end - 1].core_end;
  SpanPrediction out;
  out.span = std::string(segment_text.substr(begin, stop - begin));
  out.confidence = static_cast<double>(best_overlap) / static_cast<double>(query_stems.size());
  return out;
}

ProviderDescriptor LexicalSpanPredictor::Describe() const {
  return {ProviderKind::kSpanPredictor, "lexical", std::nullopt};
}

double LexicalSimilarity::Similarity(std::string_view a, std::string_view b) const {
  if (text::NormalizeSpace(a).empty() || text::NormalizeSpace(b).empty()) {
    throw ContractError("similarity needs non-empty strings");
  }
  const std::set<std::string> sa = StemSet(a);
  const std::set<std::string> sb = StemSet(b);
  if (sa.empty() && sb.empty()) {
    return text::AsciiLower(text::NormalizeSpace(a)) == text::AsciiLower(text::NormalizeSpace(b))
               ? 1.0
               : -1.0;
  }
  size_t common = 0;
  for (const std::string &s : sa) common += sb.count(s);
  const size_t unite = sa.size() + sb.size() - common;
  const double jaccard = static_cast<double>(common) / static_cast<double>(unite);
  return 2.0 * jaccard - 1.0;
}

ProviderDescriptor LexicalSimilarity::Describe() const {
  return {ProviderKind::kSimilarity, "lexical", std::nullopt};
}

std::vector<std::string> LexicalEntityRecognizer::RecognizeEntities(std::string_view src) const {
  const std::vector<Token> tokens = text::Tokenize(src);
  std::vector<std::string> mentions;

  auto sentence_initial = [&](size_t i) {
    if (i == 0) return true;
    const std::string_view prev = tokens[i - 1].Raw(src);
    const char last = prev.back();
    return last == '.' || last == '?' || last == '!';
  };

  size_t i = 0;
  while (i < tokens.size()) {
    if (!text::StartsWithUpper(tokens[i].Core(src))) {
      ++i;
      continue;
    }
    size_t first = i;
    size_t last = i;
    size_t j = i;
    while (!tokens[j].TrailingPunct(src)) {
      // Extend across connectors only when a capitalized token follows.
      size_t k = j + 1;
      while (k < tokens.size() && !tokens[k - 1].TrailingPunct(src)) {
        const std::string lower = text::AsciiLower(tokens[k].Core(src));
        if (lower != "of" && lower != "the") break;
        ++k;
      }
      if (k >= tokens.size() || tokens[k - 1].TrailingPunct(src) ||
          !text::StartsWithUpper(tokens[k].Core(src))) {
        break;
      }
      j = k;
      last = k;
    }
    i = last + 1;
    if (sentence_initial(first) &&
        text::IsStopword(text::AsciiLower(tokens[first].Core(src)))) {
      if (first == last) continue;
      ++first;
      // Skip a connector left at the front ("Of the Beatles" -> "Beatles").
      while (first < last && !text::StartsWithUpper(tokens[first].Core(src))) ++first;
    }
    const size_t begin = tokens[first].core_begin;
    const size_t end = tokens[last].core_end;
    if (end > begin) mentions.emplace_back(src.substr(begin, end - begin));
  }
  return mentions;
}

ProviderDescriptor LexicalEntityRecognizer::Describe() const {
  return {ProviderKind::kEntityRecognizer, "lexical", std::nullopt};
}

double LexicalEntailment::Entail(std::string_view premise, std::string_view hypothesis) const {
  if (text::NormalizeSpace(premise).empty() || text::NormalizeSpace(hypothesis).empty()) {
    throw ContractError("entailment needs a non-empty premise and hypothesis");
  }
  std::string_view type_phrase = hypothesis;
  for (std::string_view copula : {" is an ", " is a "}) {
    const size_t pos = hypothesis.find(copula);
    if (pos != std::string_view::npos) {
      type_phrase = hypothesis.substr(pos + copula.size());
      break;
    }
  }
  const std::vector<Token> type_tokens = text::Tokenize(type_phrase);
  std::string head;
  for (auto it = type_tokens.rbegin(); it != type_tokens.rend() && head.empty(); ++it) {
    head = text::Stem(text::AsciiLower(it->Core(type_phrase)));
  }
  if (head.empty()) return kMiss;
  for (const Token &t : text::Tokenize(premise)) {
    if (text::Stem(text::AsciiLower(t.Core(premise))) == head) return 1.0;
  }
  return kMiss;
}

ProviderDescriptor LexicalEntailment::Describe() const {
  return {ProviderKind::kEntailment, "lexical", std::nullopt};
}

namespace {

const std::unordered_set<std::string_view> &Lexicon(PartOfSpeech pos) {
  static const std::unordered_set<std::string_view> wh = {
      "how", "which", "what", "who", "whom", "whose", "when", "where", "why"};
  static const std::unordered_set<std::string_view> det = {
      "a", "an", "the", "this", "that", "these", "those", "each", "every", "all", "some",
      "any", "no", "another"};
  static const std::unordered_set<std::string_view> pron = {
      "i", "you", "he", "she", "it", "we", "they", "me", "him", "her", "us", "them",
      "my", "your", "his", "its", "our", "their", "there"};
  static const std::unordered_set<std::string_view> aux = {
      "is", "are", "was", "were", "be", "been", "being", "am", "do", "does", "did", "has",
      "have", "had", "can", "could", "will", "would", "shall", "should", "may", "might", "must"};
  static const std::unordered_set<std::string_view> conj = {
      "and", "or", "but", "nor", "so", "yet", "if", "because", "while", "although"};
  static const std::unordered_set<std::string_view> adp = {
      "in", "on", "at", "by", "for", "from", "with", "of", "to", "into", "during", "about",
      "over", "under", "between", "among", "across", "through", "since", "after", "before",
      "per", "within", "without", "against", "like", "as"};
  static const std::unordered_set<std::string_view> verbs = {
      "write", "wrote", "written", "sing", "sang", "sung", "play", "speak", "spoke", "spoken",
      "live", "win", "won", "make", "made", "die", "exist", "work", "release", "score", "own",
      "kill", "publish", "produce", "direct", "record", "build", "built", "contain", "include",
      "get", "got", "take", "took", "taken", "give", "gave", "given", "visit", "border",
      "attend", "sell", "sold", "star", "appear", "marry", "found", "born", "host", "employ",
      "compose", "create", "compete", "participate", "belong", "erupt", "serve", "hold",
      "held", "invade", "join", "leave", "left", "lose", "lost", "run", "ran", "fight",
      "fought", "design", "discover", "launch", "orbit", "flow", "grow", "grew", "elect",
      "appoint", "train", "teach", "taught", "study", "speak", "use", "visit", "say", "said"};
  static const std::unordered_set<std::string_view> empty;
  switch (pos) {
    case PartOfSpeech::kWh: return wh;
    case PartOfSpeech::kDeterminer: return det;
    case PartOfSpeech::kPronoun: return pron;
    case PartOfSpeech::kAuxiliary: return aux;
    case PartOfSpeech::kConjunction: return conj;
    case PartOfSpeech::kAdposition: return adp;
    case PartOfSpeech::kVerb: return verbs;
    default: return empty;
  }
}

bool IsVerb(std::string_view lower, bool after_aux) {
  const auto &verbs = Lexicon(PartOfSpeech::kVerb);
  if (verbs.count(lower) > 0) return true;
  for (std::string_view suffix : {"s", "ed", "d", "ing"}) {
    if (lower.size() > suffix.size() + 2 && lower.ends_with(suffix) &&
        verbs.count(lower.substr(0, lower.size() - suffix.size())) > 0) {
      return true;
    }
  }
  // Participles after an auxiliary: "are spoken", "were killed".
  return after_aux && lower.size() > 4 && (lower.ends_with("ed") || lower.ends_with("en"));
}

bool IsFunctionWord(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::kWh:
    case PartOfSpeech::kDeterminer:
    case PartOfSpeech::kPronoun:
    case PartOfSpeech::kAuxiliary:
    case PartOfSpeech::kConjunction:
    case PartOfSpeech::kAdposition:
    case PartOfSpeech::kPunctuation:
    case PartOfSpeech::kNumeral:
    case PartOfSpeech::kVerb:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::vector<TaggedToken> LexicalPosTagger::Tag(std::string_view src) const {
  const std::vector<Token> tokens = text::Tokenize(src);
  std::vector<TaggedToken> out;
  std::vector<std::string> lower;
  for (const Token &t : tokens) {
    TaggedToken tagged;
    tagged.text = std::string(t.HasCore() ? t.Core(src) : t.Raw(src));
    out.push_back(tagged);
    lower.push_back(text::AsciiLower(tagged.text));
  }

  // Closed classes first.
  size_t trigger_end = 0;  // index after "how many" / "number of"
  for (size_t i = 0; i < out.size(); ++i) {
    const std::string &w = lower[i];
    PartOfSpeech &pos = out[i].pos;
    const bool has_alnum = std::any_of(w.begin(), w.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80;
    });
    if (!has_alnum) {
      pos = PartOfSpeech::kPunctuation;
    } else if (i > 0 && lower[i - 1] == "how" && (w == "many" || w == "much")) {
      pos = PartOfSpeech::kWh;
      trigger_end = i + 1;
    } else if (trigger_end == 0 && i + 1 < out.size() && (w == "number" || w == "count") &&
               lower[i + 1] == "of") {
      pos = PartOfSpeech::kWh;
      out[i + 1].pos = PartOfSpeech::kWh;
      trigger_end = i + 2;
      ++i;
    } else if (w == "total" && i + 1 < out.size() && lower[i + 1] == "number") {
      pos = PartOfSpeech::kWh;
    } else if (IsNumericToken(w)) {
      pos = PartOfSpeech::kNumeral;
    } else {
      for (PartOfSpeech p : {PartOfSpeech::kWh, PartOfSpeech::kAuxiliary, PartOfSpeech::kDeterminer,
                             PartOfSpeech::kPronoun, PartOfSpeech::kConjunction,
                             PartOfSpeech::kAdposition}) {
        if (Lexicon(p).count(w) > 0) {
          pos = p;
          break;
        }
      }
    }
  }
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i].pos != PartOfSpeech::kOther) continue;
    const bool after_aux = i > 0 && out[i - 1].pos == PartOfSpeech::kAuxiliary;
    if (IsVerb(lower[i], after_aux)) out[i].pos = PartOfSpeech::kVerb;
  }

  // Answer type: the content run right after the trigger (or the first one).
  size_t start = trigger_end;
  if (trigger_end == 0) {
    while (start < out.size() && out[start].pos != PartOfSpeech::kOther) ++start;
  }
  size_t stop = start;
  while (stop < out.size() && !IsFunctionWord(out[stop].pos)) ++stop;
  if (stop > start) {
    for (size_t i = start; i + 1 < stop; ++i) out[i].pos = PartOfSpeech::kAdjective;
    out[stop - 1].pos = PartOfSpeech::kNoun;
  }

  for (TaggedToken &t : out) {
    if (t.pos == PartOfSpeech::kOther) t.pos = PartOfSpeech::kProperNoun;
  }
  for (TaggedToken &t : out) {
    if (t.pos == PartOfSpeech::kVerb) {
      t.is_root = true;
      break;
    }
  }
  return out;
}

ProviderDescriptor LexicalPosTagger::Describe() const {
  return {ProviderKind::kPosTagger, "lexical", std::nullopt};
}

ProviderSet MakeLexicalProviders() {
  ProviderSet set;
  set.count_predictor = std::make_shared<LexicalSpanPredictor>();
  set.similarity = std::make_shared<LexicalSimilarity>();
  set.ner = std::make_shared<LexicalEntityRecognizer>();
  set.entailment = std::make_shared<LexicalEntailment>();
  set.pos_tagger = std::make_shared<LexicalPosTagger>();
  return set;
}

}  // namespace countqa
