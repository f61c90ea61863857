#include "countqa/pipeline.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>

#include "countqa/errors.h"
#include "countqa/lexical_providers.h"
#include "test_support.h"

namespace countqa {
namespace {

using testing::ConstantSimilarity;
using testing::FunctionEntailment;
using testing::FunctionSpanPredictor;
using testing::ScriptedSpanPredictor;

std::vector<DatasetRecord> Fixture() { return LoadDataset(testing::FixturePath()).records; }

std::vector<PredictionRecord> Records(const std::vector<QueryRun> &runs) {
  std::vector<PredictionRecord> out;
  for (const auto &r : runs) out.push_back(r.record);
  return out;
}

TEST(Pipeline, FixtureMatchesGolden) {
  Pipeline pipeline(MakeLexicalProviders(), {});
  auto runs = pipeline.RunAll(Fixture(), 1);
  EXPECT_EQ(SerializePredictions(Records(runs)),
            testing::ReadFile(testing::GoldenDir() / "predictions.jsonl"));
  for (const auto &r : runs) {
    EXPECT_FALSE(r.inference_failed) << r.record.id;
    EXPECT_FALSE(r.explanation_failed) << r.record.id;
  }
}

TEST(Pipeline, ParallelRunIsIdenticalAndSorted) {
  Pipeline pipeline(MakeLexicalProviders(), {});
  auto records = Fixture();
  std::reverse(records.begin(), records.end());
  auto serial = SerializePredictions(Records(pipeline.RunAll(records, 1)));
  auto parallel = SerializePredictions(Records(pipeline.RunAll(records, 6)));
  EXPECT_EQ(serial, parallel);
  EXPECT_EQ(serial, testing::ReadFile(testing::GoldenDir() / "predictions.jsonl"));
}

TEST(Pipeline, ProvenanceAndPartition) {
  Pipeline pipeline(MakeLexicalProviders(), {});
  for (const auto &rec : Fixture()) {
    auto r = pipeline.Run(rec.id, rec.query, rec.segments).record;
    if (!r.c_pred) {
      EXPECT_FALSE(r.cnp_rep.has_value());
      continue;
    }
    ASSERT_TRUE(r.cnp_rep.has_value());
    EXPECT_EQ(r.cnp_rep->value, *r.c_pred);
    EXPECT_EQ(r.synonyms.size() + r.subgroups.size() + r.incomparables.size() + 1,
              r.candidates.size());
    for (const auto &span : r.provenance) {
      auto seg = std::find_if(rec.segments.begin(), rec.segments.end(),
                              [&](auto &s) { return s.id == span.segment_id; });
      ASSERT_NE(seg, rec.segments.end());
      EXPECT_NE(seg->text.find(span.span), std::string::npos);
    }
  }
}

TEST(Pipeline, SaturatedThreshold) {
  Pipeline pipeline(MakeLexicalProviders(), {});
  PredictionConfig config;
  config.theta_inference = 1.0;
  for (const auto &rec : Fixture()) {
    auto r = pipeline.Run(rec.id, rec.query, rec.segments, config).record;
    EXPECT_FALSE(r.c_pred.has_value()) << rec.id;
    EXPECT_TRUE(r.candidates.empty());
  }
}

TEST(Pipeline, TotalInferenceFailureIsFlagged) {
  ProviderSet set = MakeLexicalProviders();
  set.count_predictor = std::make_shared<FunctionSpanPredictor>(
      [](std::string_view, std::string_view) -> std::optional<SpanPrediction> {
        throw testing::Outage();
      });
  Pipeline pipeline(set, {});
  const auto rec = Fixture()[0];
  auto run = pipeline.Run(rec.id, rec.query, rec.segments);
  EXPECT_TRUE(run.inference_failed);
  EXPECT_TRUE(run.explanation_failed);  // same predictor serves instances
  EXPECT_FALSE(run.record.c_pred.has_value());
  EXPECT_FALSE(run.record.diagnostics.empty());
}

TEST(Pipeline, EntailmentOutageFlagsExplanation) {
  ProviderSet set = MakeLexicalProviders();
  set.entailment = std::make_shared<FunctionEntailment>(
      [](std::string_view, std::string_view) -> double { throw testing::Outage(); });
  Pipeline pipeline(set, {});
  const auto rec = Fixture()[0];
  auto run = pipeline.Run(rec.id, rec.query, rec.segments);
  EXPECT_FALSE(run.inference_failed);
  EXPECT_TRUE(run.explanation_failed);
  EXPECT_EQ(run.record.c_pred, 700);
}

TEST(Pipeline, DistinctInstancePredictor) {
  ProviderSet set = MakeLexicalProviders();
  std::atomic<int> calls{0};
  set.instance_predictor = std::make_shared<FunctionSpanPredictor>(
      [&](std::string_view q, std::string_view) -> std::optional<SpanPrediction> {
        ++calls;
        EXPECT_EQ(q.substr(0, 6), "which ");
        return std::nullopt;
      });
  Pipeline pipeline(set, {});
  const auto rec = Fixture()[0];
  auto r = pipeline.Run(rec.id, rec.query, rec.segments).record;
  EXPECT_EQ(calls, static_cast<int>(rec.segments.size()));
  EXPECT_TRUE(r.instances.empty());
  EXPECT_EQ(r.c_pred, 700);
}

TEST(Pipeline, MissingAnswerTypeUnderTypeCompatibility) {
  class Blank : public PosTagger {
   public:
    std::vector<TaggedToken> Tag(std::string_view) const override { return {}; }
    ProviderDescriptor Describe() const override { return {ProviderKind::kPosTagger, "b", {}}; }
  };
  ProviderSet set = MakeLexicalProviders();
  set.pos_tagger = std::make_shared<Blank>();
  Pipeline pipeline(set, {});
  const auto rec = Fixture()[0];
  auto r = pipeline.Run(rec.id, rec.query, rec.segments).record;
  EXPECT_FALSE(r.answer_type.has_value());
  EXPECT_TRUE(r.instances.empty());
  EXPECT_NE(std::find(r.diagnostics.begin(), r.diagnostics.end(),
                      "no answer type found in the query; instances were not scored"),
            r.diagnostics.end());
}

TEST(Pipeline, Preconditions) {
  ProviderSet set = MakeLexicalProviders();
  PredictionConfig bad;
  bad.alpha = 2.0;
  EXPECT_THROW(Pipeline(set, bad), ContractError);
  set.entailment = nullptr;
  try {
    Pipeline p(set, {});
    FAIL();
  } catch (const ProviderError &e) {
    EXPECT_EQ(e.reason(), ProviderError::Reason::kUnbound);
    EXPECT_NE(std::string(e.what()).find("--entailment-provider"), std::string::npos);
  }
  PredictionConfig freq;
  freq.strategy_instance = InstanceStrategy::kContextFrequency;
  EXPECT_NO_THROW(Pipeline(set, freq));
}

TEST(EvaluatePredictions, GoldenReport) {
  auto preds = LoadPredictions(testing::GoldenDir() / "predictions.jsonl");
  std::vector<int> ks{1, 5, 10};
  auto report = EvaluatePredictions(preds, Fixture(), ks);
  EXPECT_EQ(ToJson(report).dump(2) + "\n", testing::ReadFile(testing::GoldenDir() / "report.json"));
  EXPECT_EQ(FormatReport(report), testing::ReadFile(testing::GoldenDir() / "report.txt"));
  EXPECT_EQ(report.counts.total, 12u);
  ASSERT_TRUE(report.instances.has_value());
  EXPECT_EQ(report.instances->queries, 10u);
}

TEST(EvaluatePredictions, EmptyPredictionsAndUnknownIds) {
  std::vector<int> ks{1};
  auto empty = EvaluatePredictions({}, Fixture(), ks);
  EXPECT_EQ(empty.counts.coverage, 0.0);
  EXPECT_EQ(empty.counts.pc_tradeoff, 0.0);
  EXPECT_EQ(empty.diagnostics.size(), 12u);

  PredictionRecord stray;
  stray.id = "zz";
  stray.query = "how many";
  auto r = EvaluatePredictions({stray}, Fixture(), ks);
  EXPECT_NE(std::find(r.diagnostics.begin(), r.diagnostics.end(), "prediction for unknown query zz"),
            r.diagnostics.end());
}

}  // namespace
}  // namespace countqa
