#include "countqa/quantity_parser.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <regex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "countqa/errors.h"
#include "countqa/text_util.h"

namespace countqa {
namespace {

using text::Token;

// Digit groups with "," or thin-space thousands separators, optional decimals.
const std::regex &NumericLiteralPattern() {
  static const std::regex re(
      "^([0-9]{1,3}((,|\xE2\x80\x89|\xE2\x80\xAF)[0-9]{3})+|[0-9]+)(\\.[0-9]+)?$");
  return re;
}

std::optional<double> ParseDigits(std::string_view core) {
  if (!std::regex_match(core.begin(), core.end(), NumericLiteralPattern())) return std::nullopt;
  std::string digits;
  for (size_t i = 0; i < core.size(); ++i) {
    const char c = core[i];
    if ((c >= '0' && c <= '9') || c == '.') {
      digits.push_back(c);
    } else if (c == '\xE2') {
      i += 2;  // three-byte thin space
    }
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

const std::unordered_map<std::string_view, double> &ScaleWords() {
  static const std::unordered_map<std::string_view, double> m = {
      {"hundred", 1e2}, {"thousand", 1e3}, {"million", 1e6}, {"billion", 1e9}, {"dozen", 12}};
  return m;
}

const std::unordered_map<std::string_view, int> &UnitWords() {
  static const std::unordered_map<std::string_view, int> m = {
      {"zero", 0}, {"one", 1}, {"two", 2},   {"three", 3}, {"four", 4},
      {"five", 5}, {"six", 6}, {"seven", 7}, {"eight", 8}, {"nine", 9}};
  return m;
}

const std::unordered_map<std::string_view, int> &TeenWords() {
  static const std::unordered_map<std::string_view, int> m = {
      {"ten", 10},      {"eleven", 11},  {"twelve", 12},    {"thirteen", 13},
      {"fourteen", 14}, {"fifteen", 15}, {"sixteen", 16},   {"seventeen", 17},
      {"eighteen", 18}, {"nineteen", 19}};
  return m;
}

const std::unordered_map<std::string_view, int> &TensWords() {
  static const std::unordered_map<std::string_view, int> m = {
      {"twenty", 20}, {"thirty", 30},  {"forty", 40},  {"fifty", 50},
      {"sixty", 60},  {"seventy", 70}, {"eighty", 80}, {"ninety", 90}};
  return m;
}

// Measurement, percentage and currency words. A quantity followed by one of
// these is a measurement, not a count.
const std::unordered_set<std::string_view> &UnitBlocklist() {
  static const std::unordered_set<std::string_view> s = {
      "percent", "pct",     "%",        "km",      "kilometers", "kilometres", "miles",
      "mi",      "meters",  "metres",   "m",       "cm",         "mm",         "feet",
      "foot",    "ft",      "inches",   "kg",      "kilograms",  "grams",      "g",
      "lbs",     "lb",      "pounds",   "tons",    "tonnes",     "degrees",    "mph",
      "kph",     "km/h",    "acres",    "hectares", "ha",        "sq",         "square",
      "liters",  "litres",  "gallons",  "dollars", "usd",        "euros",      "eur",
      "gbp",     "yen",     "rupees",   "cents",   "hours",      "minutes",    "seconds",
      "°c",      "°f",      "mb",       "gb",      "tb",         "kb"};
  return s;
}

bool HasCurrencyPrefix(std::string_view s) {
  return s.starts_with("$") || s.starts_with("\xE2\x82\xAC") /* € */ ||
         s.starts_with("\xC2\xA3") /* £ */ || s.starts_with("\xC2\xA5") /* ¥ */ ||
         s.starts_with("US$") || s.starts_with("us$");
}

bool IsCurrencyToken(std::string_view core) {
  return core == "$" || core == "\xE2\x82\xAC" || core == "\xC2\xA3" || core == "\xC2\xA5" ||
         core == "US$";
}

// Approximators that may precede a number, up to three tokens long.
const std::unordered_set<std::string_view> &Approximators() {
  static const std::unordered_set<std::string_view> s = {
      "about",       "approximately", "approx",     "around",      "roughly",
      "nearly",      "almost",        "estimated",  "over",        "under",
      "some",        "circa",         "ca",         "c",           "~",
      "more than",   "less than",     "fewer than", "at least",    "at most",
      "up to",       "close to",      "upwards of", "just over",   "just under",
      "as many as",  "in excess of",  "as few as",  "well over",   "an estimated"};
  return s;
}

struct Mention {
  ParsedQuantity quantity;
  size_t first_token = 0;
  bool qualifies = false;
};

class SpanScanner {
 public:
  explicit SpanScanner(std::string_view span)
      : span_(span), tokens_(text::Tokenize(span)) {
    lower_.reserve(tokens_.size());
    for (const Token &t : tokens_) lower_.push_back(text::AsciiLower(t.Core(span_)));
  }

  std::optional<Mention> NumericLiteral() const {
    for (size_t i = 0; i < tokens_.size(); ++i) {
      auto m = LiteralAt(i);
      if (!m || ApproximatorBefore(i)) continue;
      if (m->qualifies) return m;
    }
    return std::nullopt;
  }

  std::optional<Mention> WordedNumber() const {
    for (size_t i = 0; i < tokens_.size(); ++i) {
      auto m = WordedAt(i);
      if (!m || ApproximatorBefore(i)) continue;
      if (m->qualifies) return m;
    }
    return std::nullopt;
  }

  std::optional<Mention> QuantifierFallback() const {
    for (size_t i = 0; i < tokens_.size(); ++i) {
      std::optional<Mention> m;
      if (ApproximatorBefore(i)) {
        m = LiteralAt(i);
        if (!m) m = WordedAt(i);
      }
      if (!m) m = GluedAt(i);
      if (!m || !m->qualifies) continue;
      m->quantity.method = ParseMethod::kQuantifierFallback;
      return m;
    }
    return std::nullopt;
  }

 private:
  // Number token at i, absorbing a following scale word ("85 million").
  std::optional<Mention> LiteralAt(size_t i) const {
    auto value = ParseDigits(tokens_[i].Core(span_));
    if (!value) return std::nullopt;
    size_t last = i;
    if (i + 1 < tokens_.size() && !tokens_[i].TrailingPunct(span_)) {
      auto it = ScaleWords().find(lower_[i + 1]);
      if (it != ScaleWords().end()) {
        *value *= it->second;
        last = i + 1;
      }
    }
    Mention m = MakeMention(i, tokens_[i].core_begin, tokens_[last].core_end, *value,
                            ParseMethod::kNumericLiteral);
    m.qualifies = *value >= 1.0 && !UnitFollows(last) && !CurrencyBefore(i);
    return m;
  }

  struct Piece {
    std::string_view word;
    size_t begin = 0;
    size_t end = 0;
    size_t token = 0;
    bool breaks_after = false;  // punctuation or token end with trailing punct
  };

  // Splits tokens starting at `from` into hyphen-separated pieces.
  std::vector<Piece> PiecesFrom(size_t from) const {
    std::vector<Piece> pieces;
    for (size_t t = from; t < tokens_.size(); ++t) {
      const Token &tok = tokens_[t];
      std::string_view lower = lower_[t];
      size_t start = 0;
      while (start <= lower.size()) {
        size_t dash = lower.find('-', start);
        if (dash == std::string_view::npos) dash = lower.size();
        Piece p;
        p.word = lower.substr(start, dash - start);
        p.begin = tok.core_begin + start;
        p.end = tok.core_begin + dash;
        p.token = t;
        p.breaks_after = dash == lower.size() && tok.TrailingPunct(span_);
        pieces.push_back(p);
        start = dash + 1;
      }
    }
    return pieces;
  }

  // Longest well-formed worded number starting at token i.
  std::optional<Mention> WordedAt(size_t i) const {
    enum class Last { kStart, kA, kUnit, kTeen, kTens, kHundred, kScale, kAnd, kDone };
    const std::vector<Piece> pieces = PiecesFrom(i);
    double total = 0.0;
    double group = 0.0;
    double last_scale = 0.0;
    Last last = Last::kStart;
    std::optional<std::pair<double, size_t>> best;  // value, last piece index

    for (size_t k = 0; k < pieces.size() && last != Last::kDone; ++k) {
      const std::string_view w = pieces[k].word;
      const bool number_may_follow =
          last == Last::kStart || last == Last::kHundred || last == Last::kScale || last == Last::kAnd;
      bool ok = false;
      if (auto it = UnitWords().find(w); it != UnitWords().end()) {
        if (it->second == 0) {
          ok = last == Last::kStart;
          if (ok) last = Last::kDone;
        } else if (number_may_follow || last == Last::kTens) {
          group += it->second;
          last = Last::kUnit;
          ok = true;
        }
      } else if (auto it = TeenWords().find(w); it != TeenWords().end()) {
        if (number_may_follow) {
          group += it->second;
          last = Last::kTeen;
          ok = true;
        }
      } else if (auto it = TensWords().find(w); it != TensWords().end()) {
        if (number_may_follow) {
          group += it->second;
          last = Last::kTens;
          ok = true;
        }
      } else if (w == "hundred") {
        if ((last == Last::kUnit || last == Last::kTeen || last == Last::kTens || last == Last::kA) &&
            group < 100) {
          group *= 100;
          last = Last::kHundred;
          ok = true;
        }
      } else if (w == "dozen") {
        if (last == Last::kUnit || last == Last::kA) {
          group *= 12;
          last = Last::kDone;
          ok = true;
        }
      } else if (auto it = ScaleWords().find(w); it != ScaleWords().end()) {
        const double scale = it->second;
        if ((last == Last::kUnit || last == Last::kTeen || last == Last::kTens ||
             last == Last::kHundred || last == Last::kA) &&
            (last_scale == 0.0 || scale < last_scale)) {
          total += group * scale;
          group = 0.0;
          last_scale = scale;
          last = Last::kScale;
          ok = true;
        }
      } else if (w == "a" || w == "an") {
        if (last == Last::kStart && k + 1 < pieces.size() &&
            ScaleWords().count(pieces[k + 1].word) > 0 && !pieces[k].breaks_after) {
          group = 1;
          last = Last::kA;
          ok = true;
        }
      } else if (w == "and") {
        if (last == Last::kHundred || last == Last::kScale) {
          last = Last::kAnd;
          ok = true;
        }
      }
      if (!ok) break;
      if (last != Last::kA && last != Last::kAnd) best = {total + group, k};
      if (pieces[k].breaks_after) break;
    }
    if (!best) return std::nullopt;
    const Piece &end_piece = pieces[best->second];
    Mention m = MakeMention(i, tokens_[i].core_begin, end_piece.end, best->first,
                            ParseMethod::kWordedNumber);
    // A mention ending mid-token ("twenty-one-year-old") is an adjective.
    const bool whole_tokens = end_piece.end == tokens_[end_piece.token].core_end;
    m.qualifies = best->first >= 1.0 && whole_tokens && !UnitFollows(end_piece.token);
    return m;
  }

  // Numbers glued to symbols or magnitude suffixes: "~180", "180+", "5k",
  // "1.5M", "150-200".
  std::optional<Mention> GluedAt(size_t i) const {
    static const std::regex re(
        "([0-9][0-9,]*(\\.[0-9]+)?)(\\+|k|K|M|B|bn|mn|%)?");
    std::string_view core = tokens_[i].Core(span_);
    if (ParseDigits(core)) return std::nullopt;  // plain literal
    std::match_results<std::string_view::const_iterator> match;
    if (!std::regex_search(core.begin(), core.end(), match, re)) return std::nullopt;
    const size_t pos = static_cast<size_t>(match.position(0));
    std::string digits;
    for (char c : match[1].str()) {
      if (c != ',') digits.push_back(c);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc()) return std::nullopt;

    const std::string suffix = match[3].matched ? match[3].str() : "";
    bool unit = suffix == "%" || HasCurrencyPrefix(core.substr(0, pos)) || CurrencyBefore(i);
    if (suffix == "k" || suffix == "K") value *= 1e3;
    if (suffix == "M" || suffix == "mn") value *= 1e6;
    if (suffix == "B" || suffix == "bn") value *= 1e9;

    const size_t after = pos + static_cast<size_t>(match.length(0));
    // Letters right after the number: ordinals, decades, glued units.
    if (after < core.size() && std::isalpha(static_cast<unsigned char>(core[after]))) unit = true;
    if (pos > 0 && std::isalpha(static_cast<unsigned char>(core[pos - 1]))) unit = true;

    // The matched text keeps magnitude suffixes but not "+" or "%".
    size_t keep = pos + static_cast<size_t>(match.length(1));
    if (suffix != "+" && suffix != "%") keep += suffix.size();
    Mention m = MakeMention(i, tokens_[i].core_begin + pos, tokens_[i].core_begin + keep, value,
                            ParseMethod::kQuantifierFallback);
    m.qualifies = value >= 1.0 && !unit && !UnitFollows(i);
    return m;
  }

  bool ApproximatorBefore(size_t i) const {
    std::string joined;
    for (size_t k = 1; k <= 3 && k <= i; ++k) {
      if (tokens_[i - k].TrailingPunct(span_)) break;
      joined = k == 1 ? lower_[i - 1] : lower_[i - k] + " " + joined;
      if (Approximators().count(joined) > 0) return true;
    }
    return false;
  }

  bool UnitFollows(size_t last_token) const {
    const std::string_view raw = tokens_[last_token].Raw(span_);
    if (raw.find('%') != std::string_view::npos) return true;
    if (last_token + 1 >= tokens_.size()) return false;
    const std::string &next = lower_[last_token + 1];
    if (UnitBlocklist().count(next) > 0) return true;
    if (next == "per" && last_token + 2 < tokens_.size() && lower_[last_token + 2] == "cent") {
      return true;
    }
    return false;
  }

  bool CurrencyBefore(size_t i) const {
    if (HasCurrencyPrefix(tokens_[i].Raw(span_))) return true;
    return i > 0 && IsCurrencyToken(tokens_[i - 1].Core(span_));
  }

  Mention MakeMention(size_t token, size_t begin, size_t end, double value,
                      ParseMethod method) const {
    Mention m;
    m.first_token = token;
    m.quantity.value = value;
    m.quantity.offset = begin;
    m.quantity.matched_text = std::string(span_.substr(begin, end - begin));
    m.quantity.method = method;
    return m;
  }

  std::string_view span_;
  std::vector<Token> tokens_;
  std::vector<std::string> lower_;
};

}  // namespace

std::string_view ToString(ParseMethod m) {
  switch (m) {
    case ParseMethod::kNumericLiteral: return "NumericLiteral";
    case ParseMethod::kWordedNumber: return "WordedNumber";
    case ParseMethod::kQuantifierFallback: return "QuantifierFallback";
  }
  return "unknown";
}

std::optional<ParsedQuantity> ExtractCount(std::string_view span_text) {
  const SpanScanner scanner(span_text);
  // Stages in cascade order. A later stage only wins when it found a
  // qualifying mention strictly to the left of every earlier stage's.
  std::optional<Mention> best = scanner.NumericLiteral();
  for (auto next : {scanner.WordedNumber(), scanner.QuantifierFallback()}) {
    if (next && (!best || next->quantity.offset < best->quantity.offset)) best = next;
  }
  if (!best) return std::nullopt;
  return best->quantity;
}

CountAndQualifier SplitCountAndQualifier(std::string_view span_text,
                                         const ParsedQuantity &parsed) {
  const std::string_view matched = parsed.matched_text;
  size_t offset = parsed.offset;
  if (offset + matched.size() > span_text.size() ||
      span_text.substr(offset, matched.size()) != matched) {
    offset = span_text.find(matched);
    if (matched.empty() || offset == std::string_view::npos) {
      throw ContractError("matched text '" + std::string(matched) + "' not found in span");
    }
  }
  std::string rest(span_text.substr(0, offset));
  rest.push_back(' ');
  rest.append(span_text.substr(offset + matched.size()));
  return {parsed.value, text::NormalizeSpace(rest)};
}

}  // namespace countqa
