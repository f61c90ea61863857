#include "countqa/explainer.h"

#include <algorithm>
#include <set>

#include "countqa/errors.h"
#include "countqa/text_util.h"

namespace countqa {
namespace {

constexpr std::string_view kHowMany = "how many";
constexpr std::string_view kRightQuote = "\xE2\x80\x99";

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string StripPossessive(std::string s) {
  for (std::string_view suffix : {std::string_view("'s"), std::string_view("'S")}) {
    if (EndsWith(s, suffix) && s.size() > suffix.size()) return s.substr(0, s.size() - 2);
  }
  const std::string curly_s = std::string(kRightQuote) + "s";
  const std::string curly_cap = std::string(kRightQuote) + "S";
  for (const std::string &suffix : {curly_s, curly_cap}) {
    if (EndsWith(s, suffix) && s.size() > suffix.size()) {
      return s.substr(0, s.size() - suffix.size());
    }
  }
  if (s.size() > 2 && s.back() == '\'' && (s[s.size() - 2] == 's' || s[s.size() - 2] == 'S')) {
    s.pop_back();
  }
  return s;
}

std::string CleanSurface(std::string_view surface) {
  return StripPossessive(text::NormalizeSpace(surface));
}

}  // namespace

std::string RewriteQuery(std::string_view query_text) {
  const std::string lower = text::AsciiLower(query_text);
  const size_t pos = lower.find(kHowMany);
  if (pos == std::string::npos) return "which " + std::string(query_text);
  std::string out(query_text);
  out.replace(pos, kHowMany.size(), "which");
  return out;
}

std::string NormalizeInstance(std::string_view surface) {
  return StripPossessive(text::CaseFold(text::NormalizeSpace(surface)));
}

InstanceIndex BuildInstanceIndex(std::string_view rewritten_query,
                                 std::span<const TextSegment> segments,
                                 const SpanPredictor &predictor, const EntityRecognizer &ner,
                                 double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ContractError("theta must lie in [0, 1]");
  InstanceIndex index;
  index.num_segments = segments.size();

  for (const TextSegment &segment : segments) {
    std::optional<SpanPrediction> prediction;
    std::vector<std::string> mentions;
    try {
      prediction = predictor.PredictSpan(rewritten_query, segment.text);
      if (!prediction || prediction->span.empty() || !(prediction->confidence > theta)) continue;
      if (segment.text.find(prediction->span) == std::string::npos) {
        throw ProviderError(ProviderError::Reason::kBadResponse,
                            "predicted span is not a substring of the segment");
      }
      mentions = ner.RecognizeEntities(prediction->span);
    } catch (const ProviderError &e) {
      ++index.failed_segments;
      index.diagnostics.push_back("segment " + segment.id + ": instance harvesting failed: " +
                                  e.what());
      continue;
    }

    SegmentHarvest harvest{segment.id, segment.rank,
                           AnswerSpan{segment.id, prediction->span, prediction->confidence},
                           {}};
    std::set<std::string> seen;
    for (const std::string &mention : mentions) {
      std::string key = NormalizeInstance(mention);
      if (key.empty() || !seen.insert(key).second) continue;
      auto [it, inserted] = index.entries.try_emplace(key);
      if (inserted) it->second.surface = CleanSurface(mention);
      it->second.postings.push_back(harvest.span);
      harvest.keys.push_back(std::move(key));
    }
    if (!harvest.keys.empty()) index.harvests.push_back(std::move(harvest));
  }
  return index;
}

std::string LocateSentence(std::string_view segment_text, std::string_view span) {
  const size_t pos = segment_text.find(span);
  if (pos == std::string_view::npos || span.empty()) return std::string(span);
  const size_t span_end = pos + span.size();
  size_t begin = pos;
  size_t end = span_end;
  bool found = false;
  for (const text::Sentence &s : text::SplitSentences(segment_text)) {
    if (!found && pos >= s.begin && pos < s.end) {
      begin = s.begin;
      end = std::max(span_end, s.end);
      found = true;
    } else if (found && s.begin < span_end) {
      end = std::max(end, s.end);
    }
  }
  return std::string(segment_text.substr(begin, end - begin));
}

RankedInstances ScoreInstances(const InstanceIndex &index, InstanceStrategy strategy,
                               const EntailmentProvider *entailment,
                               const std::optional<std::string> &answer_type,
                               std::span<const TextSegment> segments) {
  RankedInstances out;
  out.strategy = strategy;

  if (strategy == InstanceStrategy::kNoConsolidation) {
    const SegmentHarvest *top = nullptr;
    for (const SegmentHarvest &h : index.harvests) {
      if (!top || h.span.confidence > top->span.confidence ||
          (h.span.confidence == top->span.confidence && h.rank < top->rank)) {
        top = &h;
      }
    }
    if (!top) return out;
    for (const std::string &key : top->keys) {
      const InstanceEntry &entry = index.entries.at(key);
      out.items.push_back({entry.surface, top->span.confidence, entry.postings.size()});
    }
    return out;
  }

  if (strategy == InstanceStrategy::kTypeCompatibility) {
    if (!answer_type || answer_type->empty()) {
      throw ContractError("type compatibility needs the query's answer type");
    }
    if (!entailment) {
      throw ProviderError(ProviderError::Reason::kUnbound,
                          "type compatibility needs an entailment provider");
    }
  }

  std::map<std::string, std::string_view> text_by_segment;
  for (const TextSegment &s : segments) text_by_segment.emplace(s.id, s.text);

  struct Scored {
    const std::string *key;
    RankedInstance item;
  };
  std::vector<Scored> scored;
  scored.reserve(index.entries.size());
  for (const auto &[key, entry] : index.entries) {
    const double n = static_cast<double>(entry.postings.size());
    double score = 0.0;
    switch (strategy) {
      case InstanceStrategy::kContextFrequency:
        score = index.num_segments == 0 ? 0.0 : n / static_cast<double>(index.num_segments);
        break;
      case InstanceStrategy::kSummedConfidence: {
        double sum = 0.0;
        for (const AnswerSpan &p : entry.postings) sum += p.confidence;
        score = sum / n;
        break;
      }
      case InstanceStrategy::kTypeCompatibility: {
        const std::string hypothesis = entry.surface + " is a " + *answer_type;
        double sum = 0.0;
        for (const AnswerSpan &p : entry.postings) {
          auto it = text_by_segment.find(p.segment_id);
          const std::string premise =
              it == text_by_segment.end() ? p.span : LocateSentence(it->second, p.span);
          ++out.entailment_calls;
          try {
            const double prob = entailment->Entail(premise, hypothesis);
            if (!(prob >= 0.0 && prob <= 1.0)) {
              throw ProviderError(ProviderError::Reason::kBadResponse,
                                  "entailment probability outside [0, 1]");
            }
            sum += prob;
          } catch (const ProviderError &e) {
            ++out.failed_entailment_calls;
            out.diagnostics.push_back("entailment failed for '" + entry.surface + "' in segment " +
                                      p.segment_id + ": " + e.what());
          }
        }
        score = sum / n;
        break;
      }
      case InstanceStrategy::kNoConsolidation:
        break;
    }
    scored.push_back({&key, {entry.surface, score, entry.postings.size()}});
  }

  std::sort(scored.begin(), scored.end(), [](const Scored &a, const Scored &b) {
    if (a.item.score != b.item.score) return a.item.score > b.item.score;
    if (a.item.postings != b.item.postings) return a.item.postings > b.item.postings;
    return *a.key < *b.key;
  });
  for (Scored &s : scored) out.items.push_back(std::move(s.item));
  return out;
}

}  // namespace countqa
