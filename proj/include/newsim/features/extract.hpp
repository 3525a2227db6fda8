#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "newsim/corpus/article.hpp"
#include "newsim/features/ner.hpp"
#include "newsim/metric.hpp"

namespace newsim::features {

// Which provider labels feed the geography and time pipelines.
struct LabelMap {
    std::set<std::string> location{"LOCATION", "LOC", "GPE"};
    std::set<std::string> time{"DATE", "TIME"};
};

// Text spans that represent one article for one metric. spans is never empty.
struct FeatureBundle {
    MetricKind metric = MetricKind::Overall;
    std::vector<std::string> spans;
    bool fallback_used = false;

    bool operator==(const FeatureBundle&) const = default;
};

// Builds the bundle for a metric from already recognized entities of
// corpus::full_text(article). Entity metrics keep matching spans in article
// order with duplicates; an empty selection falls back to the full text.
FeatureBundle bundle_from_entities(const corpus::ArticleRecord& article, MetricKind metric,
                                   const std::vector<Entity>& entities, const LabelMap& labels = {});

// Runs the provider over title + body and builds the bundle. Full-text metrics
// never call the provider. Provider exceptions surface as ProviderError.
FeatureBundle extract_features(const corpus::ArticleRecord& article, MetricKind metric,
                               const NerProvider& ner, const LabelMap& labels = {});

// All seven bundles with a single recognize call.
PerMetric<FeatureBundle> extract_all_features(const corpus::ArticleRecord& article,
                                              const NerProvider& ner, const LabelMap& labels = {});

// Stable file-name-safe key for a persisted bundle.
std::string feature_cache_key(const std::string& article_id, MetricKind metric,
                              const std::string& provider_name);

void to_json(nlohmann::json& j, const FeatureBundle& b);
void from_json(const nlohmann::json& j, FeatureBundle& b);

// Directory of <feature_cache_key>.json files.
class FeatureCache {
public:
    explicit FeatureCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void store(const std::string& key, const FeatureBundle& bundle) const;
    std::optional<FeatureBundle> load(const std::string& key) const;

private:
    std::filesystem::path dir_;
};

} // namespace newsim::features
