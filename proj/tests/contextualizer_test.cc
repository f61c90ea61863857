#include "countqa/contextualizer.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "countqa/errors.h"
#include "oracles.h"
#include "test_support.h"

namespace countqa {
namespace {

using testing::ConstantSimilarity;
using testing::FunctionSimilarity;
using testing::LanguageCandidates;
using testing::Texts;

CountCandidate Cand(double value, double conf, std::string text = "") {
  if (text.empty()) text = std::to_string(static_cast<long long>(value)) + " things";
  return MakeCountCandidate({"s", text, conf}, value);
}

TEST(SelectRepresentative, Languages) {
  auto cs = LanguageCandidates();
  size_t rep = SelectRepresentative(cs, 700);
  EXPECT_EQ(cs[rep].cnp_text, "estimated 700 languages");
  EXPECT_DOUBLE_EQ(cs[rep].confidence(), 0.8);
}

TEST(SelectRepresentative, ArgmaxAndSingleton) {
  std::vector<CountCandidate> one{Cand(5, 0.6)};
  EXPECT_EQ(SelectRepresentative(one, 5), 0u);
  std::vector<CountCandidate> two{Cand(5, 0.7, "a"), Cand(5, 0.9, "b"), Cand(6, 1.0, "c")};
  EXPECT_EQ(SelectRepresentative(two, 5), 1u);
  std::vector<CountCandidate> tie{Cand(5, 0.9, "a"), Cand(5, 0.9, "b")};
  EXPECT_EQ(SelectRepresentative(tie, 5), 0u);
  EXPECT_THROW(SelectRepresentative(two, 7), ContractError);
}

TEST(Classify, Languages) {
  auto cs = LanguageCandidates();
  ConstantSimilarity sim(0.5);
  auto r = Contextualize(cs, 700, 0.3, sim);
  EXPECT_EQ(r.cnp_rep.cnp_text, "estimated 700 languages");
  using V = std::vector<std::string>;
  EXPECT_EQ(Texts(r.synonyms), (V{"700 languages", "about 750 dialects"}));
  EXPECT_EQ(Texts(r.subgroups), (V{"27 major regional languages", "5 official languages"}));
  EXPECT_EQ(Texts(r.incomparables), (V{"2000 ethnic groups", "85 million native speakers"}));
}

TEST(Classify, LanguagesAlphaZeroMovesDialects) {
  auto cs = LanguageCandidates();
  ConstantSimilarity sim(0.5);
  auto r = Contextualize(cs, 700, 0.0, sim);
  using V = std::vector<std::string>;
  EXPECT_EQ(Texts(r.synonyms), (V{"700 languages"}));
  EXPECT_EQ(Texts(r.subgroups), (V{"27 major regional languages", "5 official languages"}));
  EXPECT_EQ(Texts(r.incomparables),
            (V{"about 750 dialects", "2000 ethnic groups", "85 million native speakers"}));
}

TEST(Classify, NegativeSimilarityIsIncomparable) {
  std::vector<CountCandidate> cs{Cand(100, 0.9, "rep"), Cand(100, 0.5, "x"), Cand(20, 0.5, "y")};
  ConstantSimilarity sim(-0.2);
  auto r = Contextualize(cs, 100, 0.3, sim);
  EXPECT_TRUE(r.synonyms.empty());
  EXPECT_TRUE(r.subgroups.empty());
  EXPECT_EQ(r.incomparables.size(), 2u);
  ConstantSimilarity zero(0.0);
  EXPECT_EQ(Contextualize(cs, 100, 0.3, zero).incomparables.size(), 2u);
}

TEST(Classify, IntervalArithmetic) {
  // [70, 130] around 100.
  std::vector<CountCandidate> cs{Cand(100, 0.9), Cand(75, 0.5), Cand(60, 0.5), Cand(140, 0.5),
                                 Cand(70, 0.5),  Cand(130, 0.5)};
  ConstantSimilarity sim(0.5);
  auto r = Contextualize(cs, 100, 0.3, sim);
  auto values = [](const std::vector<CountCandidate> &v) {
    std::vector<double> out;
    for (auto &c : v) out.push_back(c.value);
    return out;
  };
  EXPECT_EQ(values(r.synonyms), (std::vector<double>{75, 70, 130}));
  EXPECT_EQ(values(r.subgroups), (std::vector<double>{60}));
  EXPECT_EQ(values(r.incomparables), (std::vector<double>{140}));
}

TEST(Classify, SimilarityIsOverWholeCnp) {
  std::vector<std::pair<std::string, std::string>> calls;
  FunctionSimilarity sim([&](std::string_view a, std::string_view b) {
    calls.emplace_back(a, b);
    return 0.5;
  });
  auto cs = LanguageCandidates();
  Contextualize(cs, 700, 0.3, sim);
  ASSERT_EQ(calls.size(), cs.size() - 1);
  EXPECT_EQ(calls[0].first, "700 languages");
  EXPECT_EQ(calls[0].second, "estimated 700 languages");
}

TEST(Classify, ProviderFailureGoesToIncomparables) {
  FunctionSimilarity sim([](std::string_view a, std::string_view) -> double {
    if (a == "about 750 dialects") throw testing::Outage();
    return 0.5;
  });
  auto r = Contextualize(LanguageCandidates(), 700, 0.3, sim);
  EXPECT_EQ(Texts(r.synonyms), (std::vector<std::string>{"700 languages"}));
  EXPECT_EQ(r.incomparables.front().cnp_text, "about 750 dialects");
  ASSERT_EQ(r.diagnostics.size(), 1u);
}

TEST(Classify, Preconditions) {
  auto cs = LanguageCandidates();
  ConstantSimilarity sim(0.5);
  EXPECT_THROW(Classify(cs, 0, 700, -0.1, sim), ContractError);
  EXPECT_THROW(Classify(cs, 0, 700, 1.5, sim), ContractError);
  EXPECT_THROW(Classify(cs, cs.size(), 700, 0.3, sim), ContractError);
}

// Random candidate sets over integer counts with per-text similarity signs.
struct RandomCase {
  std::vector<CountCandidate> candidates;
  std::map<std::string, bool> similar;
  int64_t c_pred = 0;
};

RandomCase MakeRandomCase(std::mt19937 &rng) {
  std::uniform_int_distribution<int> size(1, 15);
  std::uniform_int_distribution<int64_t> cp(1, 400);
  std::uniform_int_distribution<int> coin(0, 3);
  std::uniform_int_distribution<int> conf(1, 9);
  RandomCase rc;
  rc.c_pred = cp(rng);
  int n = size(rng);
  std::uniform_int_distribution<int64_t> val(1, 2 * rc.c_pred + 2);
  int rep_pos = std::uniform_int_distribution<int>(0, n - 1)(rng);
  for (int i = 0; i < n; ++i) {
    int64_t v = i == rep_pos ? rc.c_pred : val(rng);
    std::string text = "cnp" + std::to_string(i);
    rc.similar[text] = coin(rng) != 0;
    double c = i == rep_pos ? 1.0 : conf(rng) / 10.0;  // unique representative
    rc.candidates.push_back(MakeCountCandidate({"s", text, c},
                                               static_cast<double>(v), i + 1));
  }
  return rc;
}

TEST(ClassifyProperty, PartitionMatchesIntervalOracle) {
  std::mt19937 rng(424242);
  for (int trial = 0; trial < 1500; ++trial) {
    auto rc = MakeRandomCase(rng);
    FunctionSimilarity sim([&](std::string_view a, std::string_view) {
      return rc.similar.at(std::string(a)) ? 0.4 : -0.4;
    });
    int tenths = trial % 11;
    auto r = Contextualize(rc.candidates, static_cast<double>(rc.c_pred), tenths / 10.0, sim);

    std::multiset<std::string> all, parts;
    for (auto &c : rc.candidates) all.insert(c.cnp_text);
    parts.insert(r.cnp_rep.cnp_text);
    for (auto *bucket : {&r.synonyms, &r.subgroups, &r.incomparables}) {
      for (auto &c : *bucket) parts.insert(c.cnp_text);
    }
    ASSERT_EQ(all, parts);  // disjoint and exhaustive
    EXPECT_EQ(r.synonyms.size() + r.subgroups.size() + r.incomparables.size() + 1,
              rc.candidates.size());

    auto expect = [&](const std::vector<CountCandidate> &bucket, oracle::Cnp want) {
      for (auto &c : bucket) {
        EXPECT_EQ(oracle::Classify(static_cast<int64_t>(c.value), rc.c_pred, tenths,
                                   rc.similar.at(c.cnp_text)),
                  want);
      }
    };
    expect(r.synonyms, oracle::Cnp::kSynonym);
    expect(r.subgroups, oracle::Cnp::kSubgroup);
    expect(r.incomparables, oracle::Cnp::kIncomparable);
  }
}

TEST(ClassifyProperty, AlphaMonotonicity) {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    auto rc = MakeRandomCase(rng);
    FunctionSimilarity sim([&](std::string_view a, std::string_view) {
      return rc.similar.at(std::string(a)) ? 0.4 : -0.4;
    });
    std::set<std::string> prev_syn, prev_sub;
    bool first = true;
    for (int tenths = 0; tenths <= 10; ++tenths) {
      auto r = Contextualize(rc.candidates, static_cast<double>(rc.c_pred), tenths / 10.0, sim);
      auto syn = Texts(r.synonyms);
      auto sub = Texts(r.subgroups);
      std::set<std::string> s(syn.begin(), syn.end()), g(sub.begin(), sub.end());
      if (!first) {
        EXPECT_TRUE(std::includes(s.begin(), s.end(), prev_syn.begin(), prev_syn.end()));
        EXPECT_TRUE(std::includes(prev_sub.begin(), prev_sub.end(), g.begin(), g.end()));
      }
      if (tenths == 0) {
        for (auto &c : r.synonyms) EXPECT_EQ(c.value, static_cast<double>(rc.c_pred));
      }
      prev_syn = std::move(s);
      prev_sub = std::move(g);
      first = false;
    }
  }
}

TEST(ClassifyProperty, PermutationInvariant) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto rc = MakeRandomCase(rng);
    FunctionSimilarity sim([&](std::string_view a, std::string_view) {
      return rc.similar.at(std::string(a)) ? 0.4 : -0.4;
    });
    auto a = Contextualize(rc.candidates, static_cast<double>(rc.c_pred), 0.3, sim);
    auto shuffled = rc.candidates;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto b = Contextualize(shuffled, static_cast<double>(rc.c_pred), 0.3, sim);
    auto sorted = [](const std::vector<CountCandidate> &v) {
      auto t = Texts(v);
      std::sort(t.begin(), t.end());
      return t;
    };
    EXPECT_EQ(a.cnp_rep, b.cnp_rep);
    EXPECT_EQ(sorted(a.synonyms), sorted(b.synonyms));
    EXPECT_EQ(sorted(a.subgroups), sorted(b.subgroups));
    EXPECT_EQ(sorted(a.incomparables), sorted(b.incomparables));
  }
}

}  // namespace
}  // namespace countqa
