#ifndef COUNTQA_TEXT_UTIL_H_
#define COUNTQA_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace countqa::text {

// A whitespace-delimited token. [begin, end) covers the raw token in the
// source; [core_begin, core_end) drops surrounding punctuation such as
// quotes, brackets and trailing ",.;:!?".
struct Token {
  size_t begin = 0;
  size_t end = 0;
  size_t core_begin = 0;
  size_t core_end = 0;

  std::string_view Raw(std::string_view src) const { return src.substr(begin, end - begin); }
  std::string_view Core(std::string_view src) const {
    return src.substr(core_begin, core_end - core_begin);
  }
  bool HasCore() const { return core_end > core_begin; }
  // True when punctuation follows the core inside the raw token.
  bool TrailingPunct(std::string_view src) const;
};

std::vector<Token> Tokenize(std::string_view src);

// ASCII lowercase; bytes >= 0x80 are copied through.
std::string AsciiLower(std::string_view s);

// Collapses runs of whitespace to one space and trims both ends.
std::string NormalizeSpace(std::string_view s);

// Unicode full case folding (ICU).
std::string CaseFold(std::string_view utf8);

// Unicode NFC (ICU).
std::string ToNfc(std::string_view utf8);

// Decodes UTF-8 into code points; invalid bytes map to U+FFFD.
std::u32string ToCodePoints(std::string_view utf8);

bool IsStopword(std::string_view lower);

// Light suffix stemmer: possessives, plural "-ies", "-es" after sibilants,
// plain "-s". Input is expected lowercase.
std::string Stem(std::string_view lower);

// Lowercased, stemmed tokens excluding stopwords and tokens without letters
// or digits, in source order (duplicates kept).
std::vector<std::string> ContentStems(std::string_view src);

struct Sentence {
  size_t begin = 0;
  size_t end = 0;
};

// Splits on ". ", "? " and "! " (the punctuation stays with the sentence).
std::vector<Sentence> SplitSentences(std::string_view src);

bool StartsWithUpper(std::string_view s);
bool HasDigit(std::string_view s);

}  // namespace countqa::text

#endif  // COUNTQA_TEXT_UTIL_H_
