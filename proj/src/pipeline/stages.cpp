#include "newsim/pipeline/stages.hpp"

#include <fstream>
#include <future>
#include <mutex>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "newsim/corpus/stopwords.hpp"
#include "newsim/errors.hpp"
#include "newsim/eval/metrics.hpp"
#include "newsim/log.hpp"

namespace newsim::pipeline {
namespace {

using nlohmann::json;

void write_text(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

json read_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("missing artifact " + path.string());
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

corpus::Timestamp now_utc() {
    return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
}

// Memoizes embeddings by exact text; spans repeat across metrics and articles.
class MemoProvider final : public embedding::EmbeddingProvider {
public:
    explicit MemoProvider(const embedding::EmbeddingProvider& inner) : inner_(inner) {}

    std::string name() const override { return inner_.name(); }
    std::size_t dim() const override { return inner_.dim(); }
    std::size_t max_tokens() const override { return inner_.max_tokens(); }
    std::set<std::string> supported_languages() const override { return inner_.supported_languages(); }

    embedding::EmbeddingVector embed(std::string_view text) const override {
        const std::string key(text);
        {
            std::lock_guard lock(mutex_);
            if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        }
        auto v = inner_.embed(text);
        std::lock_guard lock(mutex_);
        return memo_.emplace(key, std::move(v)).first->second;
    }

private:
    const embedding::EmbeddingProvider& inner_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::string, embedding::EmbeddingVector> memo_;
};

void warn_once_no_stopwords(const std::string& language) {
    static std::mutex m;
    static std::set<std::string> warned;
    std::lock_guard lock(m);
    if (warned.insert(language).second)
        log::warn("no stopword list for language '" + language + "'; stopwords kept");
}

std::map<std::string, const corpus::PairRecord*> index_pairs(const std::vector<corpus::PairRecord>& pairs) {
    std::map<std::string, const corpus::PairRecord*> out;
    for (const auto& p : pairs) out[p.pair_id] = &p;
    return out;
}

const PerMetric<embedding::EmbeddingVector>& pooled_for(const PooledEmbeddings& pooled, const std::string& id) {
    const auto it = pooled.find(id);
    if (it == pooled.end()) throw NotFoundError("no embeddings for article " + id);
    return it->second;
}

} // namespace

// ---- ingest ---------------------------------------------------------------

void to_json(json& j, const IngestReport& r) {
    json failures = json::array();
    for (const auto& f : r.failures)
        failures.push_back({{"article_id", f.article_id}, {"url", f.url}, {"error", f.error}, {"pair_ids", f.pair_ids}});
    j = json{{"pairs_total", r.pairs_total},
             {"pairs_ok", r.pairs_ok},
             {"pairs_failed", r.pairs_failed},
             {"articles_stored", r.articles_stored},
             {"articles_existing", r.articles_existing},
             {"failures", failures},
             {"load",
              {{"rows", r.load.rows},
               {"loaded", r.load.loaded},
               {"skipped_missing_score", r.load.skipped_missing_score},
               {"skipped_invalid_score", r.load.skipped_invalid_score},
               {"language_histogram", r.load.language_histogram}}}};
}

IngestReport ingest(const fs::path& pairs_csv, const fs::path& store_dir, const IngestOptions& options) {
    auto loaded = corpus::load_pairs(pairs_csv);
    IngestReport report;
    report.load = loaded.report;
    report.pairs_total = loaded.pairs.size();

    struct Wanted {
        std::string url;
        std::string language;
        std::vector<std::string> pair_ids;
    };
    std::map<std::string, Wanted> wanted;
    for (const auto& p : loaded.pairs) {
        const auto dash = p.lang_pair.find('-');
        const std::string lang1 = p.lang_pair.substr(0, dash);
        const std::string lang2 = dash == std::string::npos ? "" : p.lang_pair.substr(dash + 1);
        for (const auto& [id, url, lang] : {std::tuple{p.article1_id, p.url1, lang1},
                                            std::tuple{p.article2_id, p.url2, lang2}}) {
            auto& w = wanted[id];
            if (w.url.empty()) {
                w.url = url;
                w.language = lang;
            }
            w.pair_ids.push_back(p.pair_id);
        }
    }

    const corpus::ArticleStore store(store_dir);
    std::set<std::string> available;
    std::vector<std::string> fetch_ids;
    std::vector<std::string> fetch_urls;
    for (const auto& [id, w] : wanted) {
        if (!options.refresh && store.contains(id)) {
            available.insert(id);
            ++report.articles_existing;
        } else {
            fetch_ids.push_back(id);
            fetch_urls.push_back(w.url);
        }
    }

    corpus::PolitenessConfig politeness = options.fetch;
    politeness.file_base = pairs_csv.parent_path();
    corpus::Fetcher fetcher(politeness);
    const auto outcomes = fetcher.fetch_all(fetch_urls);
    const auto clock = options.clock ? options.clock : now_utc;

    std::map<std::string, corpus::ArticleRecord> extracted;
    for (std::size_t i = 0; i < fetch_ids.size(); ++i) {
        const auto& id = fetch_ids[i];
        const auto& w = wanted.at(id);
        std::string error;
        if (!outcomes[i].ok()) {
            error = outcomes[i].error->what();
        } else {
            try {
                auto record = corpus::extract_article(*outcomes[i].body, id, w.url, options.extract);
                if (!w.language.empty()) record.language = w.language;
                record.fetched_at = clock();
                extracted.emplace(id, std::move(record));
                available.insert(id);
                continue;
            } catch (const Error& e) {
                error = e.what();
            }
        }
        report.failures.push_back({id, w.url, error, w.pair_ids});
        log::warn("ingest: " + error);
    }

    std::set<std::string> keep;
    for (const auto& p : loaded.pairs) {
        if (available.count(p.article1_id) && available.count(p.article2_id)) {
            ++report.pairs_ok;
            keep.insert(p.article1_id);
            keep.insert(p.article2_id);
        } else {
            ++report.pairs_failed;
        }
    }
    for (const auto& [id, record] : extracted) {
        if (!keep.count(id)) continue;
        store.store(record);
        ++report.articles_stored;
    }
    return report;
}

// ---- corpus ---------------------------------------------------------------

Corpus load_corpus(const RunConfig& config) {
    const corpus::ArticleStore store(config.store_dir);
    corpus::LoadOptions options;
    options.is_available = [&store](const std::string& id) { return store.contains(id); };
    auto loaded = corpus::load_pairs(config.pairs_csv, options);

    Corpus c;
    c.pairs = std::move(loaded.pairs);
    c.report = loaded.report;
    for (const auto& p : c.pairs)
        for (const auto& id : {p.article1_id, p.article2_id})
            if (!c.articles.count(id)) c.articles.emplace(id, store.load(id));
    return c;
}

// ---- features -------------------------------------------------------------

PerMetric<features::FeatureBundle> article_features(const corpus::ArticleRecord& article, const RunConfig& config,
                                                    const features::NerProvider& ner) {
    corpus::ArticleRecord prepared = article;
    if (config.remove_stopwords) {
        if (corpus::has_stopword_list(article.language)) {
            prepared.title = corpus::remove_stopwords(article.title, article.language);
            prepared.body = corpus::remove_stopwords(article.body, article.language);
            if (prepared.body.empty()) prepared.body = article.body;
        } else {
            warn_once_no_stopwords(article.language);
        }
    }
    return features::extract_all_features(prepared, ner);
}

ArticleFeatures run_features(const RunConfig& config, const Corpus& corpus, const features::NerProvider& ner) {
    const features::FeatureCache cache(Layout{config.output_dir}.features_dir());
    ArticleFeatures out;
    for (const auto& [id, article] : corpus.articles) {
        auto bundles = article_features(article, config, ner);
        for (MetricKind m : kAllMetrics)
            cache.store(features::feature_cache_key(id, m, ner.name()), bundles[metric_index(m)]);
        out.emplace(id, std::move(bundles));
    }
    return out;
}

ArticleFeatures load_features(const RunConfig& config, const Corpus& corpus, const std::string& ner_name) {
    const features::FeatureCache cache(Layout{config.output_dir}.features_dir());
    ArticleFeatures out;
    for (const auto& [id, _] : corpus.articles) {
        PerMetric<features::FeatureBundle> bundles;
        for (MetricKind m : kAllMetrics) {
            const auto key = features::feature_cache_key(id, m, ner_name);
            auto b = cache.load(key);
            if (!b) throw NotFoundError("no feature bundle for article " + id + " metric " +
                                        std::string(metric_name(m)) + " (run 'features' first)");
            bundles[metric_index(m)] = std::move(*b);
        }
        out.emplace(id, std::move(bundles));
    }
    return out;
}

// ---- embeddings -----------------------------------------------------------

PooledEmbeddings run_embed(const RunConfig&, const ArticleFeatures& features,
                           const embedding::EmbeddingProvider& provider) {
    const MemoProvider memo(provider);
    std::vector<std::pair<std::string, std::future<PerMetric<embedding::EmbeddingVector>>>> jobs;
    for (const auto& [id, bundles] : features) {
        jobs.emplace_back(id, std::async(std::launch::async, [&memo, &bundles = bundles] {
            PerMetric<embedding::EmbeddingVector> pooled;
            for (MetricKind m : kAllMetrics)
                pooled[metric_index(m)] = model::pooled_embedding(bundles[metric_index(m)], memo);
            return pooled;
        }));
        // Bound the number of in-flight articles.
        if (jobs.size() % 8 == 0)
            for (auto& job : jobs) job.second.wait();
    }
    PooledEmbeddings out;
    for (auto& [id, fut] : jobs) out.emplace(id, fut.get());
    return out;
}

std::vector<embedding::ExportRequest> export_requests(const ArticleFeatures& features, std::size_t max_tokens) {
    std::map<std::string, std::string> unique;
    for (const auto& [_, bundles] : features)
        for (const auto& bundle : bundles)
            for (const auto& span : bundle.spans) {
                std::string text = embedding::truncate_tokens(span, max_tokens);
                unique.emplace(embedding::cache_key(text), std::move(text));
            }
    std::vector<embedding::ExportRequest> out;
    for (auto& [key, text] : unique) out.push_back({key, std::move(text)});
    return out;
}

void save_embeddings(const fs::path& path, const std::string& provider_name, const PooledEmbeddings& pooled) {
    json articles = json::object();
    std::size_t dim = 0;
    for (const auto& [id, vectors] : pooled) {
        json per = json::object();
        for (MetricKind m : kAllMetrics) {
            per[std::string(metric_name(m))] = vectors[metric_index(m)].data();
            dim = vectors[metric_index(m)].dim();
        }
        articles[id] = std::move(per);
    }
    write_text(path, json{{"provider", provider_name}, {"dim", dim}, {"articles", articles}}.dump() + "\n");
}

PooledEmbeddings load_embeddings(const fs::path& path) {
    const json j = read_json(path);
    PooledEmbeddings out;
    try {
        for (const auto& [id, per] : j.at("articles").items()) {
            PerMetric<embedding::EmbeddingVector> vectors;
            for (MetricKind m : kAllMetrics)
                vectors[metric_index(m)] =
                    embedding::EmbeddingVector(per.at(std::string(metric_name(m))).get<std::vector<double>>());
            out.emplace(id, std::move(vectors));
        }
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return out;
}

// ---- train / evaluate / report --------------------------------------------

TrainOutcome run_train(const RunConfig& config, const std::vector<corpus::PairRecord>& pairs,
                       const PooledEmbeddings& pooled) {
    validate(config, {Requirement::Seeds});
    std::vector<std::string> ids;
    for (const auto& p : pairs) ids.push_back(p.pair_id);

    TrainOutcome outcome;
    outcome.split = corpus::split_dataset(ids, config.split_ratio, *config.split_seed);
    const auto by_id = index_pairs(pairs);

    std::vector<std::future<model::Checkpoint>> jobs;
    for (MetricKind m : kAllMetrics) {
        std::vector<model::TrainExample> examples;
        for (const auto& pid : outcome.split.train) {
            const auto& p = *by_id.at(pid);
            const auto& a = pooled_for(pooled, p.article1_id)[metric_index(m)];
            const auto& b = pooled_for(pooled, p.article2_id)[metric_index(m)];
            examples.push_back({embedding::concat(a, b).data(), corpus::normalize_score(p.raw_scores[metric_index(m)])});
        }
        const std::size_t input_dim = examples.front().input.size();
        jobs.push_back(std::async(std::launch::async, [m, input_dim, &config, examples = std::move(examples)] {
            auto head = model::init_head(m, input_dim, config.train.seed, config.hidden);
            auto trained = model::train(std::move(head), examples, config.train);
            return model::Checkpoint{std::move(trained.head), config.train, std::move(trained.loss_history)};
        }));
    }
    for (MetricKind m : kAllMetrics) outcome.checkpoints[metric_index(m)] = jobs[metric_index(m)].get();

    const Layout layout{config.output_dir};
    write_text(layout.split_file(), json(outcome.split).dump(2) + "\n");
    fs::create_directories(layout.checkpoints_dir());
    for (MetricKind m : kAllMetrics)
        model::save_checkpoint(layout.checkpoint_file(m), outcome.checkpoints[metric_index(m)]);
    return outcome;
}

eval::ScoredSets run_evaluate(const RunConfig& config, const std::vector<corpus::PairRecord>& pairs,
                              const PooledEmbeddings& pooled, const corpus::DatasetSplit& split,
                              const model::MetricModelSet& models) {
    const auto by_id = index_pairs(pairs);
    eval::ScoredSets scored;
    for (const auto& pid : split.test) {
        const auto it = by_id.find(pid);
        if (it == by_id.end()) throw NotFoundError("test pair " + pid + " is not in the corpus");
        const auto& p = *it->second;
        const auto& first = pooled_for(pooled, p.article1_id);
        const auto& second = pooled_for(pooled, p.article2_id);
        for (MetricKind m : kAllMetrics) {
            const std::size_t i = metric_index(m);
            const double target = corpus::normalize_score(p.raw_scores[i]);
            auto& base = scored[{m, eval::Approach::BaselineCosine}];
            base.preds.push_back(embedding::baseline_score(first[i], second[i]));
            base.targets.push_back(target);
            auto& ffn = scored[{m, eval::Approach::Ffn}];
            ffn.preds.push_back(model::forward(models.head(m), embedding::concat(first[i], second[i]).values()));
            ffn.targets.push_back(target);
        }
    }
    save_scores(Layout{config.output_dir}.scores_file(), scored);
    return scored;
}

void save_scores(const fs::path& path, const eval::ScoredSets& scored) {
    json cells = json::array();
    for (const auto& [key, series] : scored)
        cells.push_back({{"metric", metric_name(key.first)},
                         {"approach", eval::approach_name(key.second)},
                         {"preds", series.preds},
                         {"targets", series.targets}});
    write_text(path, json{{"cells", cells}}.dump() + "\n");
}

eval::ScoredSets load_scores(const fs::path& path) {
    const json j = read_json(path);
    eval::ScoredSets out;
    try {
        for (const auto& c : j.at("cells")) {
            const auto m = parse_metric(c.at("metric").get<std::string>());
            const auto a = eval::parse_approach(c.at("approach").get<std::string>());
            if (!m || !a) throw FormatError(path.string() + ": unknown metric or approach");
            out[{*m, *a}] = {c.at("preds").get<std::vector<double>>(), c.at("targets").get<std::vector<double>>()};
        }
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return out;
}

eval::EvalReport run_report(const RunConfig& config, const eval::ScoredSets& scored) {
    auto report = eval::build_report(scored, config.tolerances);
    const Layout layout{config.output_dir};
    write_text(layout.report_file(), json(report).dump(2) + "\n");
    write_text(layout.report_text_file(), eval::render_table(report));
    return report;
}

// ---- whole pipeline -------------------------------------------------------

int exit_code_for(const std::exception& e) {
    if (const auto* s = dynamic_cast<const StageError*>(&e)) return s->exit_code();
    if (dynamic_cast<const MissingEmbeddingError*>(&e)) return 4;
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const FormatError*>(&e) ||
        dynamic_cast<const ArgumentError*>(&e) || dynamic_cast<const RangeError*>(&e))
        return 2;
    if (dynamic_cast<const NotFoundError*>(&e)) return 3;
    return 4;
}

eval::EvalReport run_pipeline(const RunConfig& config) {
    validate(config, {Requirement::Corpus, Requirement::Seeds, Requirement::Provider, Requirement::Ner});
    const Layout layout{config.output_dir};
    fs::create_directories(layout.root);

    json manifest{{"started_at", corpus::format_utc(now_utc())}, {"stages", json::array()}, {"failed_stage", nullptr}};
    auto write_manifest = [&] { write_text(layout.manifest_file(), manifest.dump(2) + "\n"); };

    std::string stage;
    auto begin = [&](const char* name) { stage = name; };
    auto done = [&] { manifest["stages"].push_back({{"name", stage}, {"status", "ok"}}); };

    try {
        begin("load");
        const auto corpus = load_corpus(config);
        done();

        begin("features");
        const auto ner = make_ner(config);
        const auto features = run_features(config, corpus, *ner);
        done();

        begin("embed");
        const auto provider = make_provider(config);
        const auto pooled = run_embed(config, features, *provider);
        save_embeddings(layout.embeddings_file(), provider->name(), pooled);
        done();

        begin("train");
        auto trained = run_train(config, corpus.pairs, pooled);
        done();

        begin("evaluate");
        PerMetric<model::RegressionHead> heads;
        for (MetricKind m : kAllMetrics) heads[metric_index(m)] = trained.checkpoints[metric_index(m)].head;
        const model::MetricModelSet models(std::move(heads));
        const auto scored = run_evaluate(config, corpus.pairs, pooled, trained.split, models);
        done();

        begin("report");
        auto report = run_report(config, scored);
        done();

        manifest["finished_at"] = corpus::format_utc(now_utc());
        write_manifest();
        return report;
    } catch (const std::exception& e) {
        manifest["stages"].push_back({{"name", stage}, {"status", "failed"}});
        manifest["failed_stage"] = stage;
        manifest["error"] = e.what();
        write_manifest();
        throw StageError(stage, exit_code_for(e), e.what());
    }
}

// ---- predict --------------------------------------------------------------

json predict_articles(const RunConfig& config, const corpus::ArticleRecord& first,
                      const corpus::ArticleRecord& second) {
    validate(config, {Requirement::Provider, Requirement::Ner});
    const auto models = model::MetricModelSet::load(Layout{config.output_dir}.checkpoints_dir());
    const auto ner = make_ner(config);
    const auto provider = make_provider(config);
    const MemoProvider memo(*provider);

    const auto b1 = article_features(first, config, *ner);
    const auto b2 = article_features(second, config, *ner);
    const auto scores = model::predict_pair(models, b1, b2, memo);

    json out{{"article1", first.id}, {"article2", second.id}, {"provider", provider->name()}};
    json model_scores = json::object();
    json cosines = json::object();
    json fallbacks = json::object();
    for (MetricKind m : kAllMetrics) {
        const std::string name(metric_name(m));
        const std::size_t i = metric_index(m);
        model_scores[name] = scores.model[i];
        cosines[name] = scores.cosine[i];
        fallbacks[name] = {{"article1", scores.fallback_first[i]}, {"article2", scores.fallback_second[i]}};
    }
    out["scores"] = model_scores;
    out["baseline_cosine"] = cosines;
    out["fallback_used"] = fallbacks;
    return out;
}

} // namespace newsim::pipeline
