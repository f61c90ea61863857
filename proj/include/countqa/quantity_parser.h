#ifndef COUNTQA_QUANTITY_PARSER_H_
#define COUNTQA_QUANTITY_PARSER_H_

#include <optional>
#include <string>
#include <string_view>

namespace countqa {

enum class ParseMethod { kNumericLiteral, kWordedNumber, kQuantifierFallback };

std::string_view ToString(ParseMethod m);

struct ParsedQuantity {
  double value = 0.0;
  // Token run that produced the value; always a substring of the input span,
  // located at `offset`.
  std::string matched_text;
  size_t offset = 0;
  ParseMethod method = ParseMethod::kNumericLiteral;
};

// Turns an answer span into a count. Three rule sets run as a cascade:
//
//   1. numeric literals: "17", "17.0", "1,500", "85 million"
//   2. worded numbers: "seventeen", "seven hundred and two", "a dozen"
//   3. quantifier fallback: approximator + number ("approximately 180",
//      "more than 150", "estimated 700") and glued forms ("180+", "~180",
//      "5k", "1.5M"), returning the numeric core
//
// Each rule set reports its leftmost qualifying mention and the leftmost of
// those wins; at equal positions the earlier rule set wins. Numbers led by
// an approximator belong to the fallback. Values below 1 (fractions and
// zero) and quantities carrying a measurement unit, percent sign or currency
// are not counts and are skipped.
std::optional<ParsedQuantity> ExtractCount(std::string_view span_text);

struct CountAndQualifier {
  double count = 0.0;
  std::string qualifier;
};

// Removes the matched text from the span and normalizes whitespace.
// Throws ContractError if `parsed` does not describe a substring of the span.
CountAndQualifier SplitCountAndQualifier(std::string_view span_text,
                                         const ParsedQuantity &parsed);

}  // namespace countqa

#endif  // COUNTQA_QUANTITY_PARSER_H_
