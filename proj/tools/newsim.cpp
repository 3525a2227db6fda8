// Command-line driver for the pair-similarity pipeline.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "newsim/errors.hpp"
#include "newsim/pipeline/stages.hpp"

namespace fs = std::filesystem;
namespace np = newsim::pipeline;
using nlohmann::json;

namespace {

struct Common {
    std::string config_path;
    std::optional<std::string> pairs, store, output, provider;
    std::optional<std::size_t> epochs;
    std::optional<std::uint64_t> split_seed, train_seed;

    void attach(CLI::App& sub) {
        sub.add_option("-c,--config", config_path, "Run configuration (JSON)")->required();
        sub.add_option("--pairs", pairs, "Override pairs_csv");
        sub.add_option("--store", store, "Override store_dir");
        sub.add_option("--output", output, "Override output_dir");
        sub.add_option("--provider", provider, "Override provider (stub | cache:<path>)");
        sub.add_option("--epochs", epochs, "Override train.epochs");
        sub.add_option("--split-seed", split_seed, "Override split.seed");
        sub.add_option("--train-seed", train_seed, "Override train.seed");
    }

    np::RunConfig load() const {
        np::ConfigOverrides ov;
        if (pairs) ov.pairs_csv = *pairs;
        if (store) ov.store_dir = *store;
        if (output) ov.output_dir = *output;
        ov.provider = provider;
        ov.epochs = epochs;
        ov.split_seed = split_seed;
        ov.train_seed = train_seed;
        return np::load_config(config_path, ov);
    }
};

json read_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw newsim::NotFoundError("cannot read " + path.string());
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw newsim::FormatError(path.string() + ": " + e.what());
    }
}

void write_json_file(const fs::path& path, const json& j) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw newsim::Error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

newsim::corpus::ArticleRecord read_article(const fs::path& path) {
    try {
        return read_json_file(path).get<newsim::corpus::ArticleRecord>();
    } catch (const json::exception& e) {
        throw newsim::FormatError(path.string() + ": " + e.what());
    }
}

np::PooledEmbeddings load_pooled(const np::RunConfig& config) {
    const np::Layout layout{config.output_dir};
    if (!fs::exists(layout.embeddings_file()))
        throw newsim::NotFoundError("no embeddings at " + layout.embeddings_file().string() + " (run 'embed' first)");
    return np::load_embeddings(layout.embeddings_file());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multilingual news article similarity: ingest, features, embeddings, regression heads"};
    app.require_subcommand(1);

    Common common;

    auto* ingest = app.add_subcommand("ingest", "Fetch and extract the articles referenced by a pairs CSV");
    std::string ingest_pairs, ingest_out, ingest_report, ingest_config;
    bool refresh = false;
    ingest->add_option("--pairs", ingest_pairs, "Pairs CSV")->required();
    ingest->add_option("--out", ingest_out, "Article store directory")->required();
    ingest->add_option("--report", ingest_report, "Write the ingest report JSON here");
    ingest->add_option("-c,--config", ingest_config, "Optional configuration for fetch and extraction settings");
    ingest->add_flag("--refresh", refresh, "Refetch articles already in the store");

    auto* features = app.add_subcommand("features", "Extract per-metric feature bundles");
    common.attach(*features);

    auto* embed = app.add_subcommand("embed", "Pool per-metric embeddings");
    std::string export_path;
    common.attach(*embed);
    embed->add_option("--export-requests", export_path, "Write embedding requests (JSONL) instead of embedding");

    auto* train = app.add_subcommand("train", "Split the pairs and train one head per metric");
    common.attach(*train);

    auto* evaluate = app.add_subcommand("evaluate", "Score the test split with the baseline and the heads");
    common.attach(*evaluate);

    auto* report = app.add_subcommand("report", "Build the evaluation report from scored test pairs");
    common.attach(*report);

    auto* pipeline = app.add_subcommand("pipeline", "Run features through report in one go");
    common.attach(*pipeline);

    auto* predict = app.add_subcommand("predict", "Score one article pair with trained heads");
    std::string article1, article2, predict_out;
    common.attach(*predict);
    predict->add_option("--article1", article1, "First article record (JSON)")->required();
    predict->add_option("--article2", article2, "Second article record (JSON)")->required();
    predict->add_option("--out", predict_out, "Write the scores here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (ingest->parsed()) {
            np::IngestOptions options;
            if (!ingest_config.empty()) {
                const auto config = np::load_config(ingest_config);
                options.fetch = config.fetch;
                options.extract = config.extract;
            }
            options.refresh = refresh;
            const auto result = np::ingest(ingest_pairs, ingest_out, options);
            if (!ingest_report.empty()) write_json_file(ingest_report, json(result));
            std::printf("pairs: %zu ok, %zu failed; articles: %zu stored, %zu reused, %zu failed\n",
                        result.pairs_ok, result.pairs_failed, result.articles_stored, result.articles_existing,
                        result.failures.size());
            return 0;
        }

        const auto config = common.load();

        if (features->parsed()) {
            np::validate(config, {np::Requirement::Corpus, np::Requirement::Ner});
            const auto corpus = np::load_corpus(config);
            const auto ner = np::make_ner(config);
            const auto bundles = np::run_features(config, corpus, *ner);
            std::printf("features: %zu articles\n", bundles.size());
        } else if (embed->parsed()) {
            np::validate(config, {np::Requirement::Corpus, np::Requirement::Ner});
            const auto corpus = np::load_corpus(config);
            const auto bundles = np::load_features(config, corpus, np::make_ner(config)->name());
            if (!export_path.empty()) {
                auto requests = np::export_requests(bundles, config.max_tokens);
                const auto n = requests.size();
                newsim::embedding::write_export_requests(export_path, std::move(requests));
                std::printf("export: %zu requests\n", n);
                return 0;
            }
            const auto provider = np::make_provider(config);
            const auto pooled = np::run_embed(config, bundles, *provider);
            np::save_embeddings(np::Layout{config.output_dir}.embeddings_file(), provider->name(), pooled);
            std::printf("embed: %zu articles with %s\n", pooled.size(), provider->name().c_str());
        } else if (train->parsed()) {
            np::validate(config, {np::Requirement::Corpus, np::Requirement::Seeds});
            const auto corpus = np::load_corpus(config);
            const auto outcome = np::run_train(config, corpus.pairs, load_pooled(config));
            std::printf("train: %zu train / %zu test pairs\n", outcome.split.train.size(), outcome.split.test.size());
        } else if (evaluate->parsed()) {
            np::validate(config, {np::Requirement::Corpus});
            const np::Layout layout{config.output_dir};
            const auto corpus = np::load_corpus(config);
            const auto split = read_json_file(layout.split_file()).get<newsim::corpus::DatasetSplit>();
            const auto models = newsim::model::MetricModelSet::load(layout.checkpoints_dir());
            const auto scored = np::run_evaluate(config, corpus.pairs, load_pooled(config), split, models);
            std::printf("evaluate: %zu test pairs\n", split.test.size());
            (void)scored;
        } else if (report->parsed()) {
            const np::Layout layout{config.output_dir};
            if (!fs::exists(layout.scores_file()))
                throw newsim::NotFoundError("no scores at " + layout.scores_file().string() +
                                            " (run 'evaluate' first)");
            const auto result = np::run_report(config, np::load_scores(layout.scores_file()));
            std::fputs(newsim::eval::render_table(result).c_str(), stdout);
        } else if (pipeline->parsed()) {
            const auto result = np::run_pipeline(config);
            std::fputs(newsim::eval::render_table(result).c_str(), stdout);
        } else if (predict->parsed()) {
            const auto scores = np::predict_articles(config, read_article(article1), read_article(article2));
            if (predict_out.empty())
                std::cout << scores.dump(2) << "\n";
            else
                write_json_file(predict_out, scores);
        }
        return 0;
    } catch (const newsim::MissingEmbeddingError& e) {
        std::fprintf(stderr, "error: no cached embedding for key %s: %s\n", e.key().c_str(), e.what());
        return np::exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return np::exit_code_for(e);
    }
}
