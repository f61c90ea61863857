#include "countqa/quantity_parser.h"

#include <gtest/gtest.h>

#include <random>

#include "countqa/errors.h"
#include "oracles.h"

namespace countqa {
namespace {

void ExpectCount(std::string_view span, double value, ParseMethod method,
                 std::string_view matched) {
  auto q = ExtractCount(span);
  ASSERT_TRUE(q.has_value()) << span;
  EXPECT_DOUBLE_EQ(q->value, value) << span;
  EXPECT_EQ(q->method, method) << span;
  EXPECT_EQ(q->matched_text, matched) << span;
  EXPECT_EQ(span.substr(q->offset, q->matched_text.size()), q->matched_text) << span;
}

TEST(ExtractCount, NumericLiteral) {
  ExpectCount("17 regional languages", 17, ParseMethod::kNumericLiteral, "17");
  ExpectCount("1,500 islands", 1500, ParseMethod::kNumericLiteral, "1,500");
  ExpectCount("17.0 songs", 17.0, ParseMethod::kNumericLiteral, "17.0");
  ExpectCount("1 500 islands", 1500, ParseMethod::kNumericLiteral, "1 500");
}

TEST(ExtractCount, LiteralWithScaleWord) {
  ExpectCount("85 million native speakers", 85000000, ParseMethod::kNumericLiteral,
              "85 million");
  // Independent check: scale table times the literal.
  EXPECT_DOUBLE_EQ(ExtractCount("85 million native speakers")->value, 85.0 * 1000 * 1000);
}

TEST(ExtractCount, WordedNumber) {
  ExpectCount("seventeen", 17, ParseMethod::kWordedNumber, "seventeen");
  ExpectCount("seven hundred and two wives", 702, ParseMethod::kWordedNumber,
              "seven hundred and two");
  ExpectCount("twenty-one guns", 21, ParseMethod::kWordedNumber, "twenty-one");
  ExpectCount("a dozen eggs", 12, ParseMethod::kWordedNumber, "a dozen");
  ExpectCount("Eight main islands", 8, ParseMethod::kWordedNumber, "Eight");
}

TEST(ExtractCount, QuantifierFallback) {
  // The matched text is the numeric core; the approximator stays in the qualifier.
  ExpectCount("approximately 180", 180, ParseMethod::kQuantifierFallback, "180");
  ExpectCount("more than 150 songs", 150, ParseMethod::kQuantifierFallback, "150");
  ExpectCount("estimated 700 languages", 700, ParseMethod::kQuantifierFallback, "700");
  ExpectCount("180+ songs", 180, ParseMethod::kQuantifierFallback, "180");
}

TEST(ExtractCount, RejectsNonCounts) {
  EXPECT_FALSE(ExtractCount("0.5").has_value());
  EXPECT_FALSE(ExtractCount("0 moons").has_value());
  EXPECT_FALSE(ExtractCount("45 percent of voters").has_value());
  EXPECT_FALSE(ExtractCount("12% of voters").has_value());
  EXPECT_FALSE(ExtractCount("$400 in fees").has_value());
  EXPECT_FALSE(ExtractCount("4,207 meters high").has_value());
  EXPECT_FALSE(ExtractCount("the royal coat of arms").has_value());
  EXPECT_FALSE(ExtractCount("").has_value());
}

TEST(ExtractCount, LeftmostWins) {
  ExpectCount("84.55 of 209", 84.55, ParseMethod::kNumericLiteral, "84.55");
  ExpectCount("six wives and 3 sons", 6, ParseMethod::kWordedNumber, "six");
  ExpectCount("about 750 dialects and 27 languages", 750, ParseMethod::kQuantifierFallback,
              "750");
}

TEST(ExtractCount, SkipsRejectedMentionForLaterCount) {
  auto q = ExtractCount("0.5 of the 40 moons");
  ASSERT_TRUE(q.has_value());
  EXPECT_DOUBLE_EQ(q->value, 40);
}

TEST(ExtractCount, DeterministicAndIdempotent) {
  for (std::string_view s : {"estimated 700 languages", "seven hundred and two", "180+"}) {
    auto a = ExtractCount(s);
    auto b = ExtractCount(s);
    ASSERT_TRUE(a && b);
    EXPECT_EQ(a->value, b->value);
    EXPECT_EQ(a->offset, b->offset);
    // Re-parsing the matched text alone gives the same count.
    auto again = ExtractCount(a->matched_text);
    ASSERT_TRUE(again);
    EXPECT_DOUBLE_EQ(again->value, a->value);
  }
}

TEST(ExtractCount, WordRoundTripWithAnd) {
  for (int n = 1; n <= 10000; n += 7) {
    auto q = ExtractCount(oracle::Words(n, /*use_and=*/true));
    ASSERT_TRUE(q.has_value()) << oracle::Words(n, true);
    EXPECT_DOUBLE_EQ(q->value, n) << oracle::Words(n, true);
  }
}

TEST(ExtractCount, NeverReturnsFraction) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", unit(rng));
    auto q = ExtractCount(std::string(buf) + " languages");
    if (q) {
      EXPECT_GE(q->value, 1.0) << buf;
    }
  }
}

TEST(SplitCountAndQualifier, Examples) {
  auto a = SplitCountAndQualifier("17 regional languages", *ExtractCount("17 regional languages"));
  EXPECT_DOUBLE_EQ(a.count, 17);
  EXPECT_EQ(a.qualifier, "regional languages");

  auto b = SplitCountAndQualifier("seventeen", *ExtractCount("seventeen"));
  EXPECT_DOUBLE_EQ(b.count, 17);
  EXPECT_EQ(b.qualifier, "");

  // The numeric core alone is removed; surrounding words close up.
  auto c = SplitCountAndQualifier("estimated 700 languages",
                                  *ExtractCount("estimated 700 languages"));
  EXPECT_DOUBLE_EQ(c.count, 700);
  EXPECT_EQ(c.qualifier, "estimated languages");
}

TEST(SplitCountAndQualifier, RejectsForeignMatch) {
  ParsedQuantity p{800, "800", 10, ParseMethod::kNumericLiteral};
  EXPECT_THROW(SplitCountAndQualifier("estimated 700 languages", p), ContractError);
}

}  // namespace
}  // namespace countqa
