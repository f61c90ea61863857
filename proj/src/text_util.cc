#include "countqa/text_util.h"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

namespace countqa::text {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool IsLeadingPunct(char c) {
  switch (c) {
    case '(': case '[': case '{': case '"': case '\'': case '`': case '*':
      return true;
    default:
      return false;
  }
}

bool IsTrailingPunct(char c) {
  switch (c) {
    case ')': case ']': case '}': case '"': case '\'': case '`': case '*':
    case ',': case '.': case ';': case ':': case '!': case '?':
      return true;
    default:
      return false;
  }
}

// Sorted for binary search.
constexpr std::string_view kStopwords[] = {
    "a",        "about",  "above",  "after", "all",     "almost", "also",    "am",
    "an",       "and",    "any",    "approx", "approximately", "are", "around", "as",
    "at",       "be",     "been",   "being", "between", "both",   "but",     "by",
    "can",      "could",  "did",    "do",    "does",    "during", "each",    "estimated",
    "few",      "fewer",  "for",    "from",  "had",     "has",    "have",    "he",
    "her",      "here",   "his",    "how",   "i",       "if",     "in",      "into",
    "is",       "it",     "its",    "just",  "least",   "less",   "many",    "may",
    "more",     "most",   "much",   "nearly", "no",     "nor",    "not",     "of",
    "on",       "or",     "other",  "our",   "over",    "roughly", "she",    "should",
    "so",       "some",   "such",   "than",  "that",    "the",    "their",   "them",
    "then",     "there",  "these",  "they",  "this",    "those",  "to",      "under",
    "up",       "very",   "was",    "we",    "were",    "what",   "when",    "where",
    "which",    "while",  "who",    "whom",  "will",    "with",   "would",   "you",
};
static_assert(std::is_sorted(std::begin(kStopwords), std::end(kStopwords)));

}  // namespace

bool Token::TrailingPunct(std::string_view src) const {
  for (size_t i = core_end; i < end; ++i) {
    if (IsTrailingPunct(src[i]) && src[i] != '"' && src[i] != '\'' && src[i] != ')') return true;
  }
  return false;
}

std::vector<Token> Tokenize(std::string_view src) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < src.size()) {
    while (i < src.size() && IsSpace(src[i])) ++i;
    if (i >= src.size()) break;
    Token t;
    t.begin = i;
    while (i < src.size() && !IsSpace(src[i])) ++i;
    t.end = i;
    t.core_begin = t.begin;
    t.core_end = t.end;
    while (t.core_begin < t.core_end && IsLeadingPunct(src[t.core_begin])) ++t.core_begin;
    while (t.core_end > t.core_begin && IsTrailingPunct(src[t.core_end - 1])) --t.core_end;
    tokens.push_back(t);
  }
  return tokens;
}

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string NormalizeSpace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string CaseFold(std::string_view utf8) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  u.foldCase();
  std::string out;
  u.toUTF8String(out);
  return out;
}

std::string ToNfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  icu::UnicodeString normalized = nfc->normalize(u, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::u32string ToCodePoints(std::string_view utf8) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  std::u32string out;
  out.reserve(static_cast<size_t>(u.length()));
  for (int32_t i = 0; i < u.length();) {
    UChar32 cp = u.char32At(i);
    out.push_back(static_cast<char32_t>(cp));
    i += U16_LENGTH(cp);
  }
  return out;
}

bool IsStopword(std::string_view lower) {
  return std::binary_search(std::begin(kStopwords), std::end(kStopwords), lower);
}

std::string Stem(std::string_view lower) {
  std::string w(lower);
  auto ends_with = [&w](std::string_view suffix) {
    return w.size() >= suffix.size() && w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with("'s")) {
    w.resize(w.size() - 2);
  } else if (ends_with("\xE2\x80\x99s")) {  // right single quote + s
    w.resize(w.size() - 4);
  } else if (ends_with("'")) {
    w.pop_back();
  }
  if (w.size() > 4 && ends_with("ies")) {
    w.resize(w.size() - 3);
    w.push_back('y');
  } else if (ends_with("sses")) {
    w.resize(w.size() - 2);
  } else if (w.size() > 4 && (ends_with("xes") || ends_with("zes") || ends_with("ches") ||
                              ends_with("shes"))) {
    w.resize(w.size() - 2);
  } else if (w.size() > 3 && ends_with("s") && !ends_with("ss") && !ends_with("us") &&
             !ends_with("is")) {
    w.pop_back();
  }
  return w;
}

std::vector<std::string> ContentStems(std::string_view src) {
  std::vector<std::string> out;
  for (const Token &t : Tokenize(src)) {
    const std::string lower = AsciiLower(t.Core(src));
    if (lower.empty() || IsStopword(lower)) continue;
    bool has_alnum = std::any_of(lower.begin(), lower.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80;
    });
    if (!has_alnum) continue;
    out.push_back(Stem(lower));
  }
  return out;
}

std::vector<Sentence> SplitSentences(std::string_view src) {
  std::vector<Sentence> out;
  size_t start = 0;
  for (size_t i = 0; i + 1 < src.size(); ++i) {
    const char c = src[i];
    if ((c == '.' || c == '?' || c == '!') && src[i + 1] == ' ') {
      out.push_back({start, i + 1});
      start = i + 2;
      while (start < src.size() && src[start] == ' ') ++start;
      i = start - 1;
    }
  }
  if (start < src.size()) out.push_back({start, src.size()});
  return out;
}

bool StartsWithUpper(std::string_view s) {
  return !s.empty() && s.front() >= 'A' && s.front() <= 'Z';
}

bool HasDigit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace countqa::text
