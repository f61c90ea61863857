#include "countqa/provider_factory.h"

#include "countqa/errors.h"
#include "countqa/lexical_providers.h"

namespace countqa {
namespace {

class Builder {
 public:
  explicit Builder(const ProviderBindings &b) : bindings_(b) {
    if (b.cache_mode != CacheMode::kOff) {
      if (b.cache_path.empty()) throw ContractError("cache mode set without a cache path");
      cache_ = std::make_shared<ProviderCache>(b.cache_path, b.cache_mode);
    }
  }

  // Null when the binding is "none".
  std::shared_ptr<const JsonBackend> Backend(ProviderKind kind, const std::string &binding,
                                             const std::string &label) {
    std::shared_ptr<const JsonBackend> inner;
    if (binding == "none") return nullptr;
    if (binding == "lexical") {
      inner = std::make_shared<LocalBackend>(lexical_);
    } else if (binding.rfind("http://", 0) == 0) {
      inner = std::make_shared<RemoteBackend>(kind, binding, bindings_.remote);
    } else {
      throw ContractError("provider binding for " + std::string(ToString(kind)) +
                          " must be lexical, none or an http:// URL: '" + binding + "'");
    }
    if (!cache_) return inner;
    return std::make_shared<CachingBackend>(cache_, inner, label);
  }

  bool UsesWire(const std::string &binding) const {
    return cache_ != nullptr || binding.rfind("http://", 0) == 0;
  }

  const ProviderSet &lexical() const { return lexical_; }

 private:
  const ProviderBindings &bindings_;
  ProviderSet lexical_ = MakeLexicalProviders();
  std::shared_ptr<ProviderCache> cache_;
};

template <typename Typed, typename Adapter>
std::shared_ptr<const Typed> Bind(Builder &builder, ProviderKind kind, const std::string &binding,
                                  const std::shared_ptr<const Typed> &lexical,
                                  const std::string &label = "") {
  if (binding == "lexical" && !builder.UsesWire(binding)) return lexical;
  auto backend = builder.Backend(kind, binding, label);
  if (!backend) return nullptr;
  return std::make_shared<Adapter>(std::move(backend));
}

}  // namespace

ProviderSet BuildProviders(const ProviderBindings &bindings) {
  Builder builder(bindings);
  const ProviderSet &lex = builder.lexical();
  ProviderSet set;
  set.count_predictor = Bind<SpanPredictor, JsonSpanPredictor>(
      builder, ProviderKind::kSpanPredictor, bindings.span, lex.count_predictor);
  if (!bindings.instance_span.empty() && bindings.instance_span != bindings.span) {
    set.instance_predictor = Bind<SpanPredictor, JsonSpanPredictor>(
        builder, ProviderKind::kSpanPredictor, bindings.instance_span, lex.count_predictor,
        "span_predictor/instance");
  }
  set.similarity = Bind<SimilarityProvider, JsonSimilarity>(builder, ProviderKind::kSimilarity,
                                                            bindings.similarity, lex.similarity);
  set.ner = Bind<EntityRecognizer, JsonEntityRecognizer>(builder, ProviderKind::kEntityRecognizer,
                                                         bindings.ner, lex.ner);
  set.entailment = Bind<EntailmentProvider, JsonEntailment>(builder, ProviderKind::kEntailment,
                                                            bindings.entailment, lex.entailment);
  set.pos_tagger = Bind<PosTagger, JsonPosTagger>(builder, ProviderKind::kPosTagger, bindings.pos,
                                                  lex.pos_tagger);
  return set;
}

}  // namespace countqa
