#include "countqa/types.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <utility>

#include "countqa/errors.h"

namespace countqa {
namespace {

// Lowercase and drop '_', '-' and ' ' so "WeightedMedian", "weighted_median"
// and "weighted-median" all compare equal.
std::string Canonical(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '_' || c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

template <typename Enum, size_t N>
Enum ParseEnum(std::string_view name,
               const std::array<std::pair<Enum, std::string_view>, N> &table,
               std::string_view what) {
  const std::string key = Canonical(name);
  for (const auto &[value, text] : table) {
    if (Canonical(text) == key) return value;
  }
  throw ContractError("unknown " + std::string(what) + ": '" + std::string(name) + "'");
}

template <typename Enum, size_t N>
std::string_view EnumName(Enum value,
                          const std::array<std::pair<Enum, std::string_view>, N> &table) {
  for (const auto &[v, text] : table) {
    if (v == value) return text;
  }
  return "unknown";
}

constexpr std::array<std::pair<CountStrategy, std::string_view>, 4> kCountStrategies = {{
    {CountStrategy::kMostConfident, "MostConfident"},
    {CountStrategy::kMostFrequent, "MostFrequent"},
    {CountStrategy::kMedian, "Median"},
    {CountStrategy::kWeightedMedian, "WeightedMedian"},
}};

constexpr std::array<std::pair<InstanceStrategy, std::string_view>, 4> kInstanceStrategies = {{
    {InstanceStrategy::kNoConsolidation, "NoConsolidation"},
    {InstanceStrategy::kContextFrequency, "ContextFrequency"},
    {InstanceStrategy::kSummedConfidence, "SummedConfidence"},
    {InstanceStrategy::kTypeCompatibility, "TypeCompatibility"},
}};

constexpr std::array<std::pair<GoldSource, std::string_view>, 3> kGoldSources = {{
    {GoldSource::kKG, "KG"},
    {GoldSource::kSnippet, "Snippet"},
    {GoldSource::kNoDirectAnswer, "NoDirectAnswer"},
}};

constexpr std::array<std::pair<CnpCategory, std::string_view>, 3> kCnpCategories = {{
    {CnpCategory::kSynonyms, "Synonyms"},
    {CnpCategory::kSubgroups, "Subgroups"},
    {CnpCategory::kIncomparables, "Incomparables"},
}};

}  // namespace

bool SameCount(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= kCountTolerance * std::max(scale, 1.0);
}

CountCandidate MakeCountCandidate(AnswerSpan span, double value, int segment_rank) {
  if (!(value >= 1.0)) {
    throw ContractError("count candidate value must be >= 1, got " + std::to_string(value));
  }
  CountCandidate c;
  c.cnp_text = span.span;
  c.answer_span = std::move(span);
  c.value = value;
  c.segment_rank = segment_rank;
  return c;
}

std::string_view ToString(CountStrategy s) { return EnumName(s, kCountStrategies); }
std::string_view ToString(InstanceStrategy s) { return EnumName(s, kInstanceStrategies); }
std::string_view ToString(GoldSource s) { return EnumName(s, kGoldSources); }
std::string_view ToString(CnpCategory c) { return EnumName(c, kCnpCategories); }

CountStrategy ParseCountStrategy(std::string_view name) {
  return ParseEnum(name, kCountStrategies, "count strategy");
}
InstanceStrategy ParseInstanceStrategy(std::string_view name) {
  return ParseEnum(name, kInstanceStrategies, "instance strategy");
}
GoldSource ParseGoldSource(std::string_view name) {
  return ParseEnum(name, kGoldSources, "gold source");
}
CnpCategory ParseCnpCategory(std::string_view name) {
  return ParseEnum(name, kCnpCategories, "CNP category");
}

}  // namespace countqa
