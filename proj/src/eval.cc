#include "countqa/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "countqa/errors.h"
#include "countqa/text_util.h"

namespace countqa {
namespace {

constexpr double kRelaxedBand = 0.1;

std::string Normalize(std::string_view s) { return text::NormalizeSpace(text::CaseFold(s)); }

double Mean(double sum, size_t n) { return n == 0 ? 0.0 : sum / static_cast<double>(n); }

// Six decimals keep reports readable and stable across platforms.
double Round6(double v) { return std::round(v * 1e6) / 1e6; }

nlohmann::json OptionalNumber(const std::optional<double> &v) {
  return v ? nlohmann::json(Round6(*v)) : nlohmann::json(nullptr);
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string PadLeft(const std::string &s, size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string PadRight(const std::string &s, size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string FormatCount(const std::optional<double> &v) {
  if (!v) return "-";
  if (*v == std::floor(*v) && std::abs(*v) < 1e15) return Fixed(*v, 0);
  return Fixed(*v, 2);
}

}  // namespace

bool RelaxedMatch(double predicted, double gold) {
  if (!(gold > 0.0)) throw ContractError("relaxed match needs a positive gold count");
  const double low = (1.0 - kRelaxedBand) * gold;
  const double high = (1.0 + kRelaxedBand) * gold;
  return (predicted >= low || SameCount(predicted, low)) &&
         (predicted <= high || SameCount(predicted, high));
}

double Proximity(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw ContractError("proximity needs positive counts");
  return std::min(a, b) / std::max(a, b);
}

double HarmonicMean(double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return 2.0 * a * b / (a + b);
}

CountEvalReport EvaluateCounts(std::span<const CountEvalInput> inputs) {
  if (inputs.empty()) throw ContractError("count evaluation needs at least one query");
  CountEvalReport report;
  report.total = inputs.size();
  size_t matches = 0;
  double proximity_sum = 0.0;
  for (const CountEvalInput &in : inputs) {
    CountEvalRow row{in.id, in.predicted, in.gold, std::nullopt, std::nullopt};
    if (in.predicted) {
      ++report.answered;
      if (in.gold) {
        ++report.scored;
        row.relaxed_match = RelaxedMatch(*in.predicted, *in.gold);
        row.proximity = Proximity(*in.predicted, *in.gold);
        matches += *row.relaxed_match ? 1 : 0;
        proximity_sum += *row.proximity;
      }
    }
    report.rows.push_back(std::move(row));
  }
  report.relaxed_precision = 100.0 * Mean(static_cast<double>(matches), report.scored);
  report.coverage = 100.0 * Mean(static_cast<double>(report.answered), report.total);
  report.pc_tradeoff = HarmonicMean(report.relaxed_precision, report.coverage);
  report.proximity = Mean(proximity_sum, report.scored);
  return report;
}

std::vector<bool> LabelSegments(double gold_count,
                                std::span<const std::optional<double>> segment_counts) {
  if (!(gold_count > 0.0)) throw ContractError("segment labelling needs a positive gold count");
  std::vector<bool> labels;
  labels.reserve(segment_counts.size());
  for (const auto &c : segment_counts) labels.push_back(c && RelaxedMatch(*c, gold_count));
  return labels;
}

size_t EditDistance(std::u32string_view a, std::u32string_view b) {
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double NormalizedEditDistance(std::string_view a, std::string_view b) {
  const std::u32string ca = text::ToCodePoints(Normalize(a));
  const std::u32string cb = text::ToCodePoints(Normalize(b));
  const size_t longest = std::max(ca.size(), cb.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(EditDistance(ca, cb)) / static_cast<double>(longest);
}

bool InstanceRelevant(std::string_view candidate, const GoldInstance &gold) {
  if (NormalizedEditDistance(candidate, gold.canonical) < kRelevanceThreshold) return true;
  return std::any_of(gold.aliases.begin(), gold.aliases.end(), [&](const std::string &alias) {
    return NormalizedEditDistance(candidate, alias) < kRelevanceThreshold;
  });
}

std::vector<bool> RelevanceVector(std::span<const std::string> ranked,
                                  std::span<const GoldInstance> gold) {
  std::vector<bool> out;
  out.reserve(ranked.size());
  for (const std::string &r : ranked) {
    out.push_back(std::any_of(gold.begin(), gold.end(),
                              [&](const GoldInstance &g) { return InstanceRelevant(r, g); }));
  }
  return out;
}

double PrecisionAtK(const std::vector<bool> &relevant, int k) {
  const size_t n = std::min(relevant.size(), static_cast<size_t>(k));
  if (n == 0) return 0.0;
  return static_cast<double>(std::count(relevant.begin(), relevant.begin() + n, true)) /
         static_cast<double>(n);
}

double RecallAtK(std::span<const std::string> ranked, std::span<const GoldInstance> gold, int k) {
  if (gold.empty()) return 0.0;
  const size_t n = std::min(ranked.size(), static_cast<size_t>(k));
  size_t found = 0;
  for (const GoldInstance &g : gold) {
    for (size_t i = 0; i < n; ++i) {
      if (InstanceRelevant(ranked[i], g)) {
        ++found;
        break;
      }
    }
  }
  return static_cast<double>(found) / static_cast<double>(gold.size());
}

double ReciprocalRank(const std::vector<bool> &relevant) {
  for (size_t i = 0; i < relevant.size(); ++i) {
    if (relevant[i]) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

InstanceEvalReport EvaluateInstances(std::span<const InstanceEvalInput> inputs,
                                     std::span<const int> ks) {
  if (ks.empty()) throw ContractError("instance evaluation needs at least one k");
  InstanceEvalReport report;
  report.ks.assign(ks.begin(), ks.end());
  for (int k : ks) {
    if (k < 1) throw ContractError("k must be at least 1");
    report.map_at_k[k] = report.ar_at_k[k] = report.hit_at_k[k] = 0.0;
  }
  double rr_sum = 0.0;
  for (const InstanceEvalInput &in : inputs) {
    if (in.gold.empty()) continue;
    ++report.queries;
    const std::vector<bool> rel = RelevanceVector(in.ranked, in.gold);
    for (int k : ks) {
      report.map_at_k[k] += PrecisionAtK(rel, k);
      report.ar_at_k[k] += RecallAtK(in.ranked, in.gold, k);
      const size_t n = std::min(rel.size(), static_cast<size_t>(k));
      report.hit_at_k[k] += std::find(rel.begin(), rel.begin() + n, true) != rel.begin() + n;
    }
    rr_sum += ReciprocalRank(rel);
  }
  for (int k : ks) {
    report.map_at_k[k] = Mean(report.map_at_k[k], report.queries);
    report.ar_at_k[k] = Mean(report.ar_at_k[k], report.queries);
    report.hit_at_k[k] = Mean(report.hit_at_k[k], report.queries);
  }
  report.mrr = Mean(rr_sum, report.queries);
  return report;
}

CnpEvalReport EvaluateCnp(std::span<const CnpEvalInput> inputs) {
  CnpEvalReport report;
  for (CnpCategory c : {CnpCategory::kSynonyms, CnpCategory::kSubgroups, CnpCategory::kIncomparables}) {
    report.classes[c] = {};
  }
  for (const CnpEvalInput &in : inputs) {
    std::map<std::string, CnpCategory> gold;
    for (const CnpGoldLabel &g : in.gold) gold.try_emplace(Normalize(g.text), g.label);
    for (const CnpPredictedLabel &p : in.predicted) {
      auto it = gold.find(Normalize(p.text));
      if (it == gold.end()) {
        ++report.unlabeled;
        continue;
      }
      CnpClassAccuracy &cls = report.classes[p.category];
      ++cls.predicted;
      cls.correct += it->second == p.category ? 1 : 0;
    }
  }
  for (auto &[category, cls] : report.classes) {
    if (cls.predicted > 0) {
      cls.accuracy = static_cast<double>(cls.correct) / static_cast<double>(cls.predicted);
    }
  }
  return report;
}

nlohmann::json ToJson(const EvalReport &report) {
  using nlohmann::json;
  const CountEvalReport &c = report.counts;
  json counts{{"relaxed_precision", Round6(c.relaxed_precision)},
              {"coverage", Round6(c.coverage)},
              {"pc_tradeoff", Round6(c.pc_tradeoff)},
              {"proximity", Round6(c.proximity)},
              {"total", c.total},
              {"answered", c.answered},
              {"scored", c.scored}};
  json rows = json::array();
  for (const CountEvalRow &r : c.rows) {
    rows.push_back(json{{"id", r.id},
                        {"predicted", OptionalNumber(r.predicted)},
                        {"gold", OptionalNumber(r.gold)},
                        {"relaxed_match", r.relaxed_match ? json(*r.relaxed_match) : json(nullptr)},
                        {"proximity", OptionalNumber(r.proximity)}});
  }
  counts["rows"] = std::move(rows);

  json out{{"counts", std::move(counts)}, {"diagnostics", report.diagnostics}};
  if (report.instances) {
    const InstanceEvalReport &in = *report.instances;
    json map_k = json::object(), ar_k = json::object(), hit_k = json::object();
    for (int k : in.ks) {
      map_k[std::to_string(k)] = Round6(in.map_at_k.at(k));
      ar_k[std::to_string(k)] = Round6(in.ar_at_k.at(k));
      hit_k[std::to_string(k)] = Round6(in.hit_at_k.at(k));
    }
    out["instances"] = json{{"ks", in.ks},       {"map_at_k", map_k}, {"ar_at_k", ar_k},
                            {"hit_at_k", hit_k}, {"mrr", Round6(in.mrr)}, {"queries", in.queries}};
  }
  if (report.cnp) {
    json classes = json::object();
    for (const auto &[category, cls] : report.cnp->classes) {
      classes[std::string(ToString(category))] = json{
          {"predicted", cls.predicted}, {"correct", cls.correct}, {"accuracy", OptionalNumber(cls.accuracy)}};
    }
    out["cnp"] = json{{"classes", classes}, {"unlabeled", report.cnp->unlabeled}};
  }
  return out;
}

std::string FormatReport(const EvalReport &report) {
  std::ostringstream os;
  const CountEvalReport &c = report.counts;
  os << "Counts (" << c.total << " queries, " << c.answered << " answered, " << c.scored
     << " with gold)\n";
  os << "  " << PadLeft("RP", 8) << PadLeft("Cov", 8) << PadLeft("P/C", 8) << PadLeft("Prox", 8)
     << "\n";
  os << "  " << PadLeft(Fixed(c.relaxed_precision, 1), 8) << PadLeft(Fixed(c.coverage, 1), 8)
     << PadLeft(Fixed(c.pc_tradeoff, 1), 8) << PadLeft(Fixed(c.proximity, 3), 8) << "\n";

  size_t id_width = 2;
  for (const CountEvalRow &r : c.rows) id_width = std::max(id_width, r.id.size());
  os << "\n  " << PadRight("id", id_width) << PadLeft("pred", 12) << PadLeft("gold", 12)
     << PadLeft("match", 7) << PadLeft("prox", 7) << "\n";
  for (const CountEvalRow &r : c.rows) {
    os << "  " << PadRight(r.id, id_width) << PadLeft(FormatCount(r.predicted), 12)
       << PadLeft(FormatCount(r.gold), 12)
       << PadLeft(r.relaxed_match ? (*r.relaxed_match ? "yes" : "no") : "-", 7)
       << PadLeft(r.proximity ? Fixed(*r.proximity, 3) : "-", 7) << "\n";
  }

  if (report.instances) {
    const InstanceEvalReport &in = *report.instances;
    os << "\nInstances (" << in.queries
       << " queries; MAP@k is mean precision within the top k)\n  " << PadRight("", 8);
    for (int k : in.ks) os << PadLeft("@" + std::to_string(k), 8);
    os << "\n";
    auto line = [&](const char *name, const std::map<int, double> &m, double scale, int digits) {
      os << "  " << PadRight(name, 8);
      for (int k : in.ks) os << PadLeft(Fixed(scale * m.at(k), digits), 8);
      os << "\n";
    };
    line("MAP", in.map_at_k, 1.0, 3);
    line("AR", in.ar_at_k, 1.0, 3);
    line("Hit%", in.hit_at_k, 100.0, 1);
    os << "  " << PadRight("MRR", 8) << PadLeft(Fixed(in.mrr, 3), 8) << "\n";
  }

  if (report.cnp) {
    os << "\nCNP categories (" << report.cnp->unlabeled << " predictions without gold label)\n";
    for (const auto &[category, cls] : report.cnp->classes) {
      os << "  " << PadRight(std::string(ToString(category)), 14)
         << PadLeft(cls.accuracy ? Fixed(100.0 * *cls.accuracy, 1) + "%" : "n/a", 8) << "  ("
         << cls.correct << "/" << cls.predicted << ")\n";
    }
  }
  for (const std::string &d : report.diagnostics) os << "\nnote: " << d;
  if (!report.diagnostics.empty()) os << "\n";
  return os.str();
}

}  // namespace countqa
