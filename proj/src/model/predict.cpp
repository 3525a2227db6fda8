#include "newsim/model/predict.hpp"

#include "newsim/errors.hpp"
#include "newsim/model/checkpoint.hpp"

namespace newsim::model {

MetricModelSet::MetricModelSet(PerMetric<RegressionHead> heads) : heads_(std::move(heads)) {
    for (MetricKind m : kAllMetrics)
        if (heads_[metric_index(m)].metric != m)
            throw ArgumentError("head in slot " + std::string(metric_name(m)) + " is for another metric");
}

void MetricModelSet::set_head(MetricKind m, RegressionHead head) {
    if (head.metric != m) throw ArgumentError("head metric does not match its slot");
    heads_[metric_index(m)] = std::move(head);
}

MetricModelSet MetricModelSet::load(const std::filesystem::path& dir) {
    MetricModelSet set;
    for (MetricKind m : kAllMetrics) {
        auto cp = load_checkpoint(dir / (std::string(metric_name(m)) + ".json"));
        set.set_head(m, std::move(cp.head));
    }
    return set;
}

embedding::EmbeddingVector pooled_embedding(const features::FeatureBundle& bundle,
                                            const embedding::EmbeddingProvider& provider) {
    return embedding::mean_pool(embedding::embed_bundle(bundle, provider));
}

PairScores predict_pair(const MetricModelSet& models, const PerMetric<features::FeatureBundle>& first,
                        const PerMetric<features::FeatureBundle>& second,
                        const embedding::EmbeddingProvider& provider) {
    PairScores scores;
    for (MetricKind m : kAllMetrics) {
        const std::size_t i = metric_index(m);
        const auto a = pooled_embedding(first[i], provider);
        const auto b = pooled_embedding(second[i], provider);
        const auto x = embedding::concat(a, b);
        scores.model[i] = forward(models.head(m), x.values());
        scores.cosine[i] = embedding::cosine_similarity(a, b);
        scores.baseline[i] = std::max(0.0, scores.cosine[i]);
        scores.fallback_first[i] = first[i].fallback_used;
        scores.fallback_second[i] = second[i].fallback_used;
    }
    return scores;
}

} // namespace newsim::model
