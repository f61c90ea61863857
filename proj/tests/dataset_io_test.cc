#include "countqa/dataset_io.h"

#include <gtest/gtest.h>

#include "countqa/errors.h"
#include "test_support.h"

namespace countqa {
namespace {

using nlohmann::json;
using testing::TempDir;
using testing::WriteFile;

json MinimalLine() {
  return json{{"id", "q1"},
              {"query", "how many moons does Jupiter have"},
              {"segments", json::array({json{{"id", "s1"}, {"rank", 1}, {"text", "95 moons."}}})}};
}

TEST(LoadDataset, Fixture) {
  auto load = LoadDataset(testing::FixturePath());
  EXPECT_EQ(load.records.size(), 12u);
  EXPECT_TRUE(load.warnings.empty());
  const auto &q1 = load.records[0];
  EXPECT_EQ(q1.id, "q01");
  EXPECT_EQ(q1.gold.gold_count, 700);
  EXPECT_EQ(q1.gold.source, GoldSource::kSnippet);
  ASSERT_TRUE(q1.gold.category_labels.has_value());
  const auto &q12 = load.records[11];
  EXPECT_FALSE(q12.gold.gold_count.has_value());
  EXPECT_EQ(q12.gold.source, GoldSource::kNoDirectAnswer);
}

TEST(LoadDataset, RoundTrip) {
  auto load = LoadDataset(testing::FixturePath());
  TempDir dir;
  std::string out;
  for (const auto &r : load.records) out += ToJson(r).dump() + "\n";
  WriteFile(dir / "copy.jsonl", out);
  auto again = LoadDataset(dir / "copy.jsonl");
  EXPECT_EQ(again.records, load.records);
}

TEST(LoadDataset, EmptyFileWarns) {
  TempDir dir;
  WriteFile(dir / "empty.jsonl", "");
  auto load = LoadDataset(dir / "empty.jsonl");
  EXPECT_TRUE(load.records.empty());
  ASSERT_EQ(load.warnings.size(), 1u);
}

TEST(LoadDataset, MissingQueryNamesFieldAndLine) {
  TempDir dir;
  json bad = MinimalLine();
  bad.erase("query");
  WriteFile(dir / "d.jsonl", MinimalLine().dump() + "\n" + bad.dump() + "\n");
  try {
    LoadDataset(dir / "d.jsonl");
    FAIL() << "expected DataError";
  } catch (const DataError &e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find(":2:"), std::string::npos) << msg;
    EXPECT_NE(msg.find("query"), std::string::npos) << msg;
  }
  auto lenient = LoadDataset(dir / "d.jsonl", LoadMode::kLenient);
  EXPECT_EQ(lenient.records.size(), 1u);
  ASSERT_EQ(lenient.warnings.size(), 1u);
  EXPECT_NE(lenient.warnings[0].find("(skipped)"), std::string::npos);
}

TEST(LoadDataset, RejectsDuplicateIdsAndBadJson) {
  TempDir dir;
  WriteFile(dir / "dup.jsonl", MinimalLine().dump() + "\n" + MinimalLine().dump() + "\n");
  EXPECT_THROW(LoadDataset(dir / "dup.jsonl"), DataError);
  WriteFile(dir / "bad.jsonl", "{not json\n");
  EXPECT_THROW(LoadDataset(dir / "bad.jsonl"), DataError);
  EXPECT_THROW(LoadDataset(dir / "missing.jsonl"), DataError);
}

TEST(ParseDatasetRecord, Validation) {
  auto expect_field = [](json line, const std::string &field) {
    try {
      ParseDatasetRecord(line);
      ADD_FAILURE() << "accepted " << line.dump();
    } catch (const DataError &e) {
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
    }
  };
  json j = MinimalLine();
  j["gold_count"] = 0.5;
  expect_field(j, "gold_count");
  j = MinimalLine();
  j["segments"].push_back(json{{"id", "s2"}, {"rank", 1}, {"text", "x"}});
  expect_field(j, "rank");
  j = MinimalLine();
  j["segments"].push_back(json{{"id", "s1"}, {"rank", 2}, {"text", "x"}});
  expect_field(j, "id");
  j = MinimalLine();
  j["segments"][0]["text"] = "";
  expect_field(j, "text");
  j = MinimalLine();
  j["gold_source"] = "Oracle";
  expect_field(j, "gold_source");
  j = MinimalLine();
  j["cnp_gold"] = json::array({json{{"text", "x"}, {"label", "Cousins"}}});
  expect_field(j, "label");

  j = MinimalLine();
  j["gold_count"] = nullptr;
  EXPECT_FALSE(ParseDatasetRecord(j).gold.gold_count.has_value());
}

TEST(ParseDatasetRecord, AppliesNfc) {
  json j = MinimalLine();
  j["query"] = "how many caf\x65\xCC\x81s";
  EXPECT_EQ(ParseDatasetRecord(j).query, "how many caf\xC3\xA9s");
}

PredictionRecord SamplePrediction() {
  PredictionRecord r;
  r.id = "q1";
  r.query = "how many moons does Jupiter have";
  r.answer_type = "moons";
  r.c_pred = 95;
  ScoredCnp a{"Jupiter has 95 moons", 95, 1.0, "s1", 1};
  r.candidates = {a};
  r.cnp_rep = a;
  r.instances = {{"Io", 0.5, 1}};
  r.provenance = {{"s1", "Jupiter has 95 moons", 1.0}};
  r.instance_provenance = {{"s2", "Io and Europa", 0.5}};
  r.diagnostics = {"note"};
  return r;
}

TEST(PredictionRecord, RoundTripAndExplicitNulls) {
  auto r = SamplePrediction();
  EXPECT_EQ(ParsePredictionRecord(ToJson(r)), r);

  PredictionRecord empty;
  empty.id = "q2";
  empty.query = "how many unicorns";
  auto j = ToJson(empty);
  EXPECT_TRUE(j.contains("c_pred"));
  EXPECT_TRUE(j["c_pred"].is_null());
  EXPECT_TRUE(j["cnp_rep"].is_null());
  EXPECT_TRUE(j["answer_type"].is_null());
  EXPECT_EQ(ParsePredictionRecord(j), empty);
  EXPECT_NE(j.dump().find("\"c_pred\":null"), std::string::npos);
}

TEST(PredictionRecord, StableSerialization) {
  std::vector<PredictionRecord> rs{SamplePrediction(), SamplePrediction()};
  rs[1].id = "q2";
  EXPECT_EQ(SerializePredictions(rs), SerializePredictions(rs));
  TempDir dir;
  WritePredictions(dir / "p.jsonl", rs);
  EXPECT_EQ(testing::ReadFile(dir / "p.jsonl"), SerializePredictions(rs));
  EXPECT_EQ(LoadPredictions(dir / "p.jsonl"), rs);
  // Keys are sorted.
  auto line = SerializePredictions({rs[0]});
  EXPECT_LT(line.find("\"answer_type\""), line.find("\"c_pred\""));
  EXPECT_LT(line.find("\"c_pred\""), line.find("\"query\""));
}

TEST(PredictionRecord, RejectsMalformed) {
  auto j = ToJson(SamplePrediction());
  j.erase("id");
  EXPECT_THROW(ParsePredictionRecord(j), DataError);
  j = ToJson(SamplePrediction());
  j["config"]["strategy_count"] = "Mode";
  EXPECT_THROW(ParsePredictionRecord(j), DataError);
}

}  // namespace
}  // namespace countqa
