#pragma once

#include <filesystem>
#include <optional>

#include "newsim/embedding/provider.hpp"
#include "newsim/features/extract.hpp"
#include "newsim/model/head.hpp"

namespace newsim::model {

// One independent head per metric.
class MetricModelSet {
public:
    MetricModelSet() = default;
    explicit MetricModelSet(PerMetric<RegressionHead> heads);

    const RegressionHead& head(MetricKind m) const { return heads_[metric_index(m)]; }

    // Replaces one head; throws ArgumentError if head.metric != m.
    void set_head(MetricKind m, RegressionHead head);

    // Heads loaded from <dir>/<metric>.json; NotFoundError if any is missing.
    static MetricModelSet load(const std::filesystem::path& dir);

private:
    PerMetric<RegressionHead> heads_{};
};

struct PairScores {
    PerMetric<double> model{};           // head output in (0, 1)
    PerMetric<double> cosine{};          // raw cosine of the pooled embeddings
    PerMetric<double> baseline{};        // max(0, cosine)
    PerMetric<bool> fallback_first{};    // first article's bundle used the full text
    PerMetric<bool> fallback_second{};
};

// Pooled article embedding for one bundle.
embedding::EmbeddingVector pooled_embedding(const features::FeatureBundle& bundle,
                                            const embedding::EmbeddingProvider& provider);

// Per metric: forward(head, concat(pool(embed(b1)), pool(embed(b2)))).
// Order matters: swapping the articles changes the input.
PairScores predict_pair(const MetricModelSet& models, const PerMetric<features::FeatureBundle>& first,
                        const PerMetric<features::FeatureBundle>& second,
                        const embedding::EmbeddingProvider& provider);

} // namespace newsim::model
