#include "newsim/features/extract.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "newsim/errors.hpp"
#include "newsim/hashing.hpp"

namespace newsim::features {
namespace {

std::vector<Entity> run_provider(const NerProvider& ner, const std::string& text,
                                 const std::string& language) {
    try {
        return ner.recognize(text, language);
    } catch (const ProviderError&) {
        throw;
    } catch (const std::exception& e) {
        throw ProviderError("NER provider '" + ner.name() + "' failed: " + e.what());
    }
}

} // namespace

FeatureBundle bundle_from_entities(const corpus::ArticleRecord& article, MetricKind metric,
                                   const std::vector<Entity>& entities, const LabelMap& labels) {
    FeatureBundle bundle;
    bundle.metric = metric;
    if (!is_entity_metric(metric)) {
        bundle.spans = {corpus::full_text(article)};
        return bundle;
    }
    for (const auto& e : entities) {
        const bool keep = metric == MetricKind::Entities ||
                          (metric == MetricKind::Geography && labels.location.count(e.label)) ||
                          (metric == MetricKind::Time && labels.time.count(e.label));
        if (keep && !e.text.empty()) bundle.spans.push_back(e.text);
    }
    if (bundle.spans.empty()) {
        bundle.spans = {corpus::full_text(article)};
        bundle.fallback_used = true;
    }
    return bundle;
}

FeatureBundle extract_features(const corpus::ArticleRecord& article, MetricKind metric,
                               const NerProvider& ner, const LabelMap& labels) {
    if (article.body.empty()) throw ArgumentError("article " + article.id + " has an empty body");
    if (!is_entity_metric(metric)) return bundle_from_entities(article, metric, {}, labels);
    const auto entities = run_provider(ner, corpus::full_text(article), article.language);
    return bundle_from_entities(article, metric, entities, labels);
}

PerMetric<FeatureBundle> extract_all_features(const corpus::ArticleRecord& article,
                                              const NerProvider& ner, const LabelMap& labels) {
    if (article.body.empty()) throw ArgumentError("article " + article.id + " has an empty body");
    const auto entities = run_provider(ner, corpus::full_text(article), article.language);
    PerMetric<FeatureBundle> out;
    for (MetricKind m : kAllMetrics)
        out[metric_index(m)] = bundle_from_entities(article, m, entities, labels);
    return out;
}

std::string feature_cache_key(const std::string& article_id, MetricKind metric,
                              const std::string& provider_name) {
    std::string material = article_id;
    material += '\x1f';
    material += metric_name(metric);
    material += '\x1f';
    material += provider_name;
    return std::string(metric_name(metric)) + "-" + sha256_hex(material).substr(0, 32);
}

void to_json(nlohmann::json& j, const FeatureBundle& b) {
    j = nlohmann::json{{"metric", metric_name(b.metric)},
                       {"spans", b.spans},
                       {"fallback_used", b.fallback_used}};
}

void from_json(const nlohmann::json& j, FeatureBundle& b) {
    const auto metric = parse_metric(j.at("metric").get<std::string>());
    if (!metric) throw FormatError("unknown metric in feature bundle: " + j.at("metric").dump());
    b.metric = *metric;
    b.spans = j.at("spans").get<std::vector<std::string>>();
    b.fallback_used = j.at("fallback_used").get<bool>();
    if (b.spans.empty()) throw FormatError("feature bundle with no spans");
}

void FeatureCache::store(const std::string& key, const FeatureBundle& bundle) const {
    std::filesystem::create_directories(dir_);
    std::ofstream out(dir_ / (key + ".json"), std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write feature cache entry " + key);
    out << nlohmann::json(bundle).dump(2) << '\n';
}

std::optional<FeatureBundle> FeatureCache::load(const std::string& key) const {
    std::ifstream in(dir_ / (key + ".json"), std::ios::binary);
    if (!in) return std::nullopt;
    nlohmann::json j;
    in >> j;
    return j.get<FeatureBundle>();
}

} // namespace newsim::features
