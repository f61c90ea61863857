// Acceptance gate: runs each primary criterion and prints one PASS/FAIL
// line per criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "countqa/answer_inference.h"
#include "countqa/cli.h"
#include "countqa/contextualizer.h"
#include "countqa/errors.h"
#include "countqa/eval.h"
#include "countqa/quantity_parser.h"
#include "countqa/text_util.h"
#include "oracles.h"
#include "test_support.h"

namespace countqa {
namespace {

using testing::FunctionSimilarity;

// Collects failures for one criterion; the first few are printed.
class Check {
 public:
  void Expect(bool ok, const std::string &what) {
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string Summary() const {
    std::string s = std::to_string(count_) + " failure(s)";
    for (const auto &f : failures_) s += "; " + f;
    return s;
  }

 private:
  std::vector<std::string> failures_;
  size_t count_ = 0;
};

std::string Str(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string Join(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  std::string s;
  for (const auto &x : v) s += (s.empty() ? "" : ", ") + x;
  return "{" + s + "}";
}

void Criterion1(Check &c) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<WeightedCount> s = {
      {150, 0.9, 1}, {160, 0.8, 2}, {180, 0.4, 3}, {180, 0.4, 4}, {210, 0.3, 5}};
  const std::pair<CountStrategy, double> want[] = {{CountStrategy::kMostConfident, 150},
                                                   {CountStrategy::kMostFrequent, 180},
                                                   {CountStrategy::kMedian, 180},
                                                   {CountStrategy::kWeightedMedian, 160}};
  for (const auto &[strategy, value] : want) {
    const double got = Consolidate(s, strategy);
    c.Expect(got == value, std::string(ToString(strategy)) + " gave " + Str(got));
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  c.Expect(elapsed < std::chrono::seconds(1), "took over 1 s");
}

void Criterion2(Check &c) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(1001);
  std::uniform_int_distribution<int> size(1, 20);
  std::uniform_int_distribution<int> value(1, 40);
  std::uniform_int_distribution<int64_t> weight(1, 1000);  // weight / 1000 lies in (0, 1]
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<WeightedCount> s;
    std::vector<std::pair<double, int64_t>> items;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
      const int64_t w = weight(rng);
      const double v = value(rng);
      s.push_back({v, static_cast<double>(w) / 1000.0, i + 1});
      items.emplace_back(v, w);
    }
    const double got = Consolidate(s, CountStrategy::kWeightedMedian);
    const double want = oracle::WeightedMedian(items);
    c.Expect(got == want, "trial " + std::to_string(trial) + ": " + Str(got) + " vs " + Str(want));
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  c.Expect(elapsed < std::chrono::seconds(5), "took over 5 s");
}

void Criterion3(Check &c) {
  auto candidates = testing::LanguageCandidates();
  FunctionSimilarity sim([](std::string_view, std::string_view) { return 0.5; });
  auto r = Contextualize(candidates, 700, 0.3, sim);
  using V = std::vector<std::string>;
  c.Expect(r.cnp_rep.cnp_text == "estimated 700 languages", "rep " + r.cnp_rep.cnp_text);
  const V syn = testing::Texts(r.synonyms), sub = testing::Texts(r.subgroups),
          inc = testing::Texts(r.incomparables);
  c.Expect(Join(syn) == Join(V{"700 languages", "about 750 dialects"}), "synonyms " + Join(syn));
  c.Expect(Join(sub) == Join(V{"27 major regional languages", "5 official languages"}),
           "subgroups " + Join(sub));
  c.Expect(Join(inc) == Join(V{"2000 ethnic groups", "85 million native speakers"}),
           "incomparables " + Join(inc));
}

void Criterion4(Check &c) {
  std::mt19937 rng(4004);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 15)(rng);
    const int64_t c_pred = std::uniform_int_distribution<int64_t>(1, 400)(rng);
    const int rep_pos = std::uniform_int_distribution<int>(0, n - 1)(rng);
    std::uniform_int_distribution<int64_t> val(1, 2 * c_pred + 2);
    std::vector<CountCandidate> cs;
    std::map<std::string, bool> similar;
    for (int i = 0; i < n; ++i) {
      const std::string text = "cnp" + std::to_string(i);
      const int64_t v = i == rep_pos ? c_pred : val(rng);
      similar[text] = rng() % 4 != 0;
      const double conf = i == rep_pos ? 1.0 : static_cast<double>(1 + rng() % 9) / 10.0;
      cs.push_back(MakeCountCandidate({"s", text, conf}, static_cast<double>(v), i + 1));
    }
    FunctionSimilarity sim([&](std::string_view a, std::string_view) {
      return similar.at(std::string(a)) ? 0.4 : -0.4;
    });

    std::set<std::string> prev_syn;
    for (int tenths = 0; tenths <= 10; ++tenths) {
      auto r = Contextualize(cs, static_cast<double>(c_pred), tenths / 10.0, sim);
      std::multiset<std::string> all, parts;
      for (const auto &x : cs) all.insert(x.cnp_text);
      parts.insert(r.cnp_rep.cnp_text);
      for (const auto *bucket : {&r.synonyms, &r.subgroups, &r.incomparables}) {
        for (const auto &x : *bucket) parts.insert(x.cnp_text);
      }
      c.Expect(all == parts, "trial " + std::to_string(trial) + " is not a partition");
      std::set<std::string> syn;
      for (const auto &x : r.synonyms) syn.insert(x.cnp_text);
      c.Expect(std::includes(syn.begin(), syn.end(), prev_syn.begin(), prev_syn.end()),
               "trial " + std::to_string(trial) + " loses synonyms at alpha " +
                   Str(tenths / 10.0));
      prev_syn = std::move(syn);
    }
  }
}

void Criterion5(Check &c) {
  const double pairs[][3] = {{37.7, 84.7, 52.2}, {45.0, 96.1, 61.3}, {93.2, 18.3, 30.6}};
  for (const auto &p : pairs) {
    const double got = HarmonicMean(p[0], p[1]);
    c.Expect(std::fabs(got - p[2]) <= 0.05,
             "(" + Str(p[0]) + ", " + Str(p[1]) + ") gave " + Str(got));
  }
}

void Criterion6(Check &c) {
  // Names pairwise far apart under normalized edit distance, so relevance
  // reduces to case-insensitive identity.
  const std::vector<std::string> vocab = {
      "Ganymede", "Callisto", "Europa", "Amalthea", "Himalia",  "Elara",      "Pasiphae",
      "Sinope",   "Lysithea", "Carme",  "Ananke",   "Leda",     "Thebe",      "Adrastea",
      "Metis",    "Themisto", "Taygete", "Chaldene", "Megaclite", "Callirrhoe"};
  for (size_t a = 0; a < vocab.size(); ++a) {
    for (size_t b = a + 1; b < vocab.size(); ++b) {
      c.Expect(NormalizedEditDistance(vocab[a], vocab[b]) >= kRelevanceThreshold,
               vocab[a] + " ~ " + vocab[b]);
    }
  }
  std::mt19937 rng(6006);
  const std::vector<int> ks{1, 3, 5, 10, 20};
  for (int trial = 0; trial < 500; ++trial) {
    const size_t nq = std::uniform_int_distribution<size_t>(1, 4)(rng);
    std::vector<InstanceEvalInput> inputs;
    std::vector<oracle::RankedQuery> queries;
    for (size_t q = 0; q < nq; ++q) {
      std::vector<size_t> order(vocab.size());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      const size_t ngold = std::uniform_int_distribution<size_t>(1, 6)(rng);
      std::vector<size_t> gold(order.begin(), order.begin() + ngold);
      InstanceEvalInput in;
      in.id = "q" + std::to_string(q);
      for (size_t g : gold) in.gold.push_back({vocab[g], {}});
      oracle::RankedQuery oq;
      oq.num_gold = ngold;
      std::shuffle(order.begin(), order.end(), rng);
      const size_t nranked = std::uniform_int_distribution<size_t>(0, 15)(rng);
      for (size_t i = 0; i < nranked; ++i) {
        std::string name = vocab[order[i]];
        if (rng() % 3 == 0) name = text::AsciiLower(name);
        in.ranked.push_back(name);
        auto it = std::find(gold.begin(), gold.end(), order[i]);
        oq.found.push_back(it == gold.end() ? -1 : static_cast<int>(it - gold.begin()));
      }
      inputs.push_back(std::move(in));
      queries.push_back(std::move(oq));
    }
    const auto r = EvaluateInstances(inputs, ks);
    const std::string tag = "trial " + std::to_string(trial);
    double mrr = 0;
    for (const auto &q : queries) mrr += oracle::ReciprocalRank(q);
    c.Expect(r.mrr == mrr / nq, tag + " MRR");
    for (int k : ks) {
      double map = 0, ar = 0, hit = 0;
      for (const auto &q : queries) {
        map += oracle::PrecisionAtK(q, k);
        ar += oracle::RecallAtK(q, k);
        hit += oracle::HitAtK(q, k);
      }
      c.Expect(r.map_at_k.at(k) == map / nq, tag + " MAP@" + std::to_string(k));
      c.Expect(r.ar_at_k.at(k) == ar / nq, tag + " AR@" + std::to_string(k));
      c.Expect(r.hit_at_k.at(k) == hit / nq, tag + " Hit@" + std::to_string(k));
    }
    for (size_t i = 1; i < ks.size(); ++i) {
      c.Expect(r.hit_at_k.at(ks[i - 1]) <= r.hit_at_k.at(ks[i]), tag + " Hit@k not monotone");
      c.Expect(r.ar_at_k.at(ks[i - 1]) <= r.ar_at_k.at(ks[i]), tag + " AR@k not monotone");
    }
  }
}

void Criterion7(Check &c) {
  for (int n = 1; n <= 10000; ++n) {
    const std::string words = oracle::Words(n);
    const auto q = ExtractCount(words);
    c.Expect(q.has_value() && q->value == n,
             "'" + words + "' gave " + (q ? Str(q->value) : std::string("nothing")));
  }
  std::mt19937 rng(7007);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    double v = unit(rng);
    while (v == 0.0) v = unit(rng);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    const auto q = ExtractCount(std::string(buf) + " languages");
    c.Expect(!q.has_value(), std::string(buf) + " parsed as " + (q ? Str(q->value) : ""));
    bool rejected = false;
    try {
      MakeCountCandidate({"s", buf, 0.9}, v);
    } catch (const ContractError &) {
      rejected = true;
    }
    c.Expect(rejected, std::string(buf) + " accepted as a count");
  }
}

void Criterion8(Check &c) {
  testing::TempDir dir;
  const std::string fixture = testing::FixturePath().string();
  auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "countqa");
    std::vector<const char *> argv;
    for (const auto &a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
    c.Expect(code == kExitOk, args[1] + " exited " + std::to_string(code) + ": " + err.str());
    return out.str();
  };
  const auto first = (dir / "first.jsonl").string();
  const auto second = (dir / "second.jsonl").string();
  run({"answer", "--dataset", fixture, "--output", first});
  run({"answer", "--dataset", fixture, "--output", second});
  const std::string a = testing::ReadFile(first), b = testing::ReadFile(second);
  c.Expect(!a.empty() && a == b, "two runs differ");
  c.Expect(a == testing::ReadFile(testing::GoldenDir() / "predictions.jsonl"),
           "predictions differ from the frozen file");
  const auto report = (dir / "report.json").string();
  const std::string text =
      run({"evaluate", "--predictions", first, "--dataset", fixture, "--report", report});
  c.Expect(testing::ReadFile(report) == testing::ReadFile(testing::GoldenDir() / "report.json"),
           "report.json differs from the frozen report");
  c.Expect(text == testing::ReadFile(testing::GoldenDir() / "report.txt"),
           "text report differs from the frozen report");
}

void Criterion9(Check &c) {
  c.Expect(RelaxedMatch(507, 503), "(507, 503) should match");
  c.Expect(!RelaxedMatch(234, 503), "(234, 503) should not match");
}

}  // namespace
}  // namespace countqa

int main() {
  using countqa::Check;
  const std::pair<const char *, std::function<void(Check &)>> criteria[] = {
      {"consolidation worked example", countqa::Criterion1},
      {"weighted median vs brute force, 1000 multisets", countqa::Criterion2},
      {"languages example with stub similarities", countqa::Criterion3},
      {"partition and alpha-monotonicity, 1000 sets", countqa::Criterion4},
      {"P/C harmonic-mean pairs", countqa::Criterion5},
      {"ranking metrics vs direct definitions, 500 cases", countqa::Criterion6},
      {"parse(words(n)) for 1..10000 and fraction rejection", countqa::Criterion7},
      {"fixture determinism and frozen report", countqa::Criterion8},
      {"relaxed-match anchors", countqa::Criterion9},
  };
  int failed = 0;
  int index = 1;
  for (const auto &[name, fn] : criteria) {
    Check check;
    try {
      fn(check);
    } catch (const std::exception &e) {
      check.Expect(false, std::string("exception: ") + e.what());
    }
    if (check.ok()) {
      std::printf("PASS criterion %d: %s\n", index, name);
    } else {
      ++failed;
      std::printf("FAIL criterion %d: %s (%s)\n", index, name, check.Summary().c_str());
    }
    ++index;
  }
  return failed == 0 ? 0 : 1;
}
