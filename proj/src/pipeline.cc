#include "countqa/pipeline.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "countqa/answer_inference.h"
#include "countqa/contextualizer.h"
#include "countqa/errors.h"
#include "countqa/explainer.h"
#include "countqa/query_components.h"
#include "countqa/text_util.h"

namespace countqa {
namespace {

void CheckUnit(double v, const char *name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ContractError(std::string(name) + " must lie in [0, 1]");
}

[[noreturn]] void Unbound(const std::string &what) {
  throw ProviderError(ProviderError::Reason::kUnbound, what);
}

void Append(std::vector<std::string> &to, const std::vector<std::string> &from) {
  to.insert(to.end(), from.begin(), from.end());
}

std::vector<ScoredCnp> Scored(const std::vector<CountCandidate> &candidates) {
  std::vector<ScoredCnp> out;
  out.reserve(candidates.size());
  for (const CountCandidate &c : candidates) out.push_back(ToScoredCnp(c));
  return out;
}

}  // namespace

void Validate(const PredictionConfig &config) {
  CheckUnit(config.theta_inference, "theta_inference");
  CheckUnit(config.theta_explanation, "theta_explanation");
  CheckUnit(config.alpha, "alpha");
}

void CheckBindings(const ProviderSet &providers, const PredictionConfig &config) {
  if (!providers.count_predictor) Unbound("no span predictor is bound (--span-provider)");
  if (!providers.similarity) Unbound("no similarity provider is bound (--similarity-provider)");
  if (!providers.ner) Unbound("no entity recognizer is bound (--ner-provider)");
  if (config.strategy_instance == InstanceStrategy::kTypeCompatibility && !providers.entailment) {
    Unbound(
        "the TypeCompatibility instance strategy needs an entailment provider; bind one with "
        "--entailment-provider or choose another --strategy-instance");
  }
}

Pipeline::Pipeline(ProviderSet providers, PredictionConfig defaults)
    : providers_(std::move(providers)), defaults_(defaults) {
  Validate(defaults_);
  CheckBindings(providers_, defaults_);
}

QueryRun Pipeline::Run(std::string_view id, std::string_view query,
                       std::span<const TextSegment> segments,
                       const PredictionConfig &config) const {
  Validate(config);
  CheckBindings(providers_, config);

  QueryRun run;
  PredictionRecord &r = run.record;
  r.id = std::string(id);
  r.query = std::string(query);
  r.config = config;

  CountQuery q;
  try {
    q = DeriveQueryComponents(query, providers_.pos_tagger.get(), id);
  } catch (const ProviderError &e) {
    r.diagnostics.push_back(std::string("query analysis failed: ") + e.what());
    q.id = std::string(id);
    q.text = text::NormalizeSpace(query);
  }
  r.answer_type = q.answer_type;

  const InferenceResult inference = InferAnswer(
      q, segments, *providers_.count_predictor, {config.theta_inference, config.strategy_count});
  r.c_pred = inference.c_pred;
  r.candidates = Scored(inference.candidates);
  r.provenance = inference.per_segment_spans;
  Append(r.diagnostics, inference.diagnostics);
  run.inference_failed = !segments.empty() && inference.failed_segments == segments.size();

  if (inference.c_pred) {
    const CnpClassification cls =
        Contextualize(inference.candidates, *inference.c_pred, config.alpha, *providers_.similarity);
    r.cnp_rep = ToScoredCnp(cls.cnp_rep);
    r.synonyms = Scored(cls.synonyms);
    r.subgroups = Scored(cls.subgroups);
    r.incomparables = Scored(cls.incomparables);
    Append(r.diagnostics, cls.diagnostics);
  }

  const InstanceIndex index = BuildInstanceIndex(RewriteQuery(q.text), segments,
                                                 *providers_.InstancePredictor(), *providers_.ner,
                                                 config.theta_explanation);
  for (const SegmentHarvest &h : index.harvests) r.instance_provenance.push_back(h.span);
  Append(r.diagnostics, index.diagnostics);
  run.explanation_failed = !segments.empty() && index.failed_segments == segments.size();

  if (config.strategy_instance == InstanceStrategy::kTypeCompatibility && !q.answer_type) {
    r.diagnostics.push_back("no answer type found in the query; instances were not scored");
  } else {
    const RankedInstances ranked = ScoreInstances(index, config.strategy_instance,
                                                  providers_.entailment.get(), q.answer_type, segments);
    r.instances = ranked.items;
    Append(r.diagnostics, ranked.diagnostics);
    if (ranked.entailment_calls > 0 && ranked.failed_entailment_calls == ranked.entailment_calls) {
      run.explanation_failed = true;
    }
  }
  return run;
}

std::vector<QueryRun> Pipeline::RunAll(const std::vector<DatasetRecord> &records,
                                       size_t jobs) const {
  std::vector<QueryRun> out(records.size());
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (size_t i = next++; i < records.size(); i = next++) {
      try {
        out[i] = Run(records[i].id, records[i].query, records[i].segments);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = records.size();
      }
    }
  };
  const size_t threads = std::clamp<size_t>(jobs, 1, std::max<size_t>(records.size(), 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread &t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  std::sort(out.begin(), out.end(),
            [](const QueryRun &a, const QueryRun &b) { return a.record.id < b.record.id; });
  return out;
}

EvalReport EvaluatePredictions(const std::vector<PredictionRecord> &predictions,
                               const std::vector<DatasetRecord> &dataset, std::span<const int> ks) {
  EvalReport report;
  std::map<std::string, const PredictionRecord *> by_id;
  for (const PredictionRecord &p : predictions) {
    if (!by_id.emplace(p.id, &p).second) {
      report.diagnostics.push_back("duplicate prediction for query " + p.id);
    }
  }
  std::map<std::string, const DatasetRecord *> gold_by_id;
  for (const DatasetRecord &d : dataset) gold_by_id.emplace(d.id, &d);
  for (const auto &[id, p] : by_id) {
    if (!gold_by_id.count(id)) report.diagnostics.push_back("prediction for unknown query " + id);
  }

  std::vector<CountEvalInput> counts;
  std::vector<InstanceEvalInput> instances;
  std::vector<CnpEvalInput> cnps;
  for (const DatasetRecord &d : dataset) {
    auto it = by_id.find(d.id);
    const PredictionRecord *p = it == by_id.end() ? nullptr : it->second;
    if (!p) report.diagnostics.push_back("no prediction for query " + d.id);
    counts.push_back({d.id, p ? p->c_pred : std::nullopt, d.gold.gold_count});
    if (!d.gold.gold_instances.empty()) {
      InstanceEvalInput in{d.id, {}, d.gold.gold_instances};
      if (p) {
        for (const RankedInstance &ri : p->instances) in.ranked.push_back(ri.instance);
      }
      instances.push_back(std::move(in));
    }
    if (d.gold.category_labels) {
      CnpEvalInput in{d.id, {}, *d.gold.category_labels};
      if (p) {
        for (const ScoredCnp &c : p->synonyms) in.predicted.push_back({c.cnp_text, CnpCategory::kSynonyms});
        for (const ScoredCnp &c : p->subgroups) in.predicted.push_back({c.cnp_text, CnpCategory::kSubgroups});
        for (const ScoredCnp &c : p->incomparables) {
          in.predicted.push_back({c.cnp_text, CnpCategory::kIncomparables});
        }
      }
      cnps.push_back(std::move(in));
    }
  }
  report.counts = EvaluateCounts(counts);
  if (!instances.empty()) report.instances = EvaluateInstances(instances, ks);
  if (!cnps.empty()) report.cnp = EvaluateCnp(cnps);
  return report;
}

}  // namespace countqa
