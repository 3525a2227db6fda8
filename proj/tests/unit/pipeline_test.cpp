#include <doctest.h>

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "newsim/embedding/cache_file.hpp"
#include "newsim/errors.hpp"
#include "newsim/pipeline/config.hpp"
#include "newsim/pipeline/stages.hpp"
#include "support.hpp"

using namespace newsim;
using namespace newsim::pipeline;
using newsim::testing::mini_corpus;
using newsim::testing::read_file;
using newsim::testing::TempDir;
using newsim::testing::write_file;
using nlohmann::json;

namespace {

corpus::Timestamp fixed_clock() { return corpus::parse_utc("2024-01-01T00:00:00Z"); }

IngestReport ingest_fixture(const fs::path& store, const std::string& csv = "pairs.csv", bool refresh = false) {
    IngestOptions options;
    options.clock = fixed_clock;
    options.refresh = refresh;
    return ingest(mini_corpus() / csv, store, options);
}

RunConfig fixture_config(const TempDir& dir, const ConfigOverrides& extra = {}) {
    ConfigOverrides ov = extra;
    ov.store_dir = dir / "store";
    if (!ov.output_dir) ov.output_dir = dir / "run";
    return load_config(mini_corpus() / "config.json", ov);
}

std::size_t count_files(const fs::path& dir) {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file()) ++n;
    return n;
}

} // namespace

TEST_SUITE("pipeline") {

// ---- config ---------------------------------------------------------------

TEST_CASE("config resolves paths relative to its file and applies overrides") {
    TempDir dir;
    write_file(dir / "cfg/run.json",
               R"({"pairs_csv": "data/pairs.csv", "store_dir": "/abs/store", "output_dir": "out",
                   "provider": "cache:emb.tsv", "ner": "gazetteer:lex", "split": {"seed": 1},
                   "train": {"seed": 2, "epochs": 3}})");
    auto c = load_config(dir / "cfg/run.json");
    CHECK(c.pairs_csv == (dir / "cfg/data/pairs.csv").lexically_normal());
    CHECK(c.store_dir == "/abs/store");
    CHECK(c.provider == "cache:" + (dir / "cfg/emb.tsv").lexically_normal().string());
    CHECK(c.ner == "gazetteer:" + (dir / "cfg/lex").lexically_normal().string());
    CHECK(c.train.epochs == 3);
    CHECK(c.train.seed == 2);
    CHECK(*c.split_seed == 1);

    ConfigOverrides ov;
    ov.epochs = 5;
    ov.train_seed = 9;
    ov.provider = "stub";
    c = load_config(dir / "cfg/run.json", ov);
    CHECK(c.train.epochs == 5);
    CHECK(c.train.seed == 9);
    CHECK(c.provider == "stub");
}

TEST_CASE("config rejects unknown keys, bad types and bad ranges") {
    CHECK_THROWS_AS(parse_config(R"({"colour": 1})", "."), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"train": {"lr": 0.1}})", "."), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"train": {"epochs": "ten"}})", "."), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"split": {"ratio": 1.5}})", "."), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"train": {"momentum": 1.0}})", "."), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"tolerances": [0.2, 0]})", "."), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]", "."), ConfigError);
    CHECK_THROWS_AS(parse_config("{", "."), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("validation requires seeds and existing inputs") {
    const auto c = parse_config(R"({"provider": "bert"})", ".");
    CHECK_THROWS_AS(validate(c, {Requirement::Seeds}), ConfigError);
    CHECK_THROWS_AS(validate(c, {Requirement::Provider}), ConfigError);
    CHECK_THROWS_AS(validate(c, {Requirement::Ner}), ConfigError);
    CHECK_THROWS_AS(validate(c, {Requirement::Corpus}), ConfigError);
    const auto ok = parse_config(R"({"split": {"seed": 1}, "train": {"seed": 1}})", ".");
    CHECK_NOTHROW(validate(ok, {Requirement::Seeds, Requirement::Provider}));
}

// ---- ingest ---------------------------------------------------------------

TEST_CASE("ingesting the mini corpus stores 24 articles") {
    TempDir dir;
    const auto report = ingest_fixture(dir / "store");
    CHECK(report.pairs_total == 12);
    CHECK(report.pairs_ok == 12);
    CHECK(report.articles_stored == 24);
    CHECK(report.failures.empty());
    CHECK(count_files(dir / "store") == 24);

    const auto a = corpus::ArticleStore(dir / "store").load("a01");
    CHECK(a.title == "Floods hit Paris after days of rain");
    CHECK(a.language == "en");
    CHECK(a.body.find("Related articles") == std::string::npos);
    CHECK(a.body.find("tracker") == std::string::npos);
    CHECK(a.headings.size() == 2);
}

TEST_CASE("re-ingesting is idempotent") {
    TempDir dir;
    ingest_fixture(dir / "store");
    const auto before = read_file(dir / "store/a07.json");
    const auto again = ingest_fixture(dir / "store");
    CHECK(again.articles_existing == 24);
    CHECK(again.articles_stored == 0);
    CHECK(read_file(dir / "store/a07.json") == before);

    const auto refreshed = ingest_fixture(dir / "store", "pairs.csv", true);
    CHECK(refreshed.articles_stored == 24);
    CHECK(read_file(dir / "store/a07.json") == before);
}

TEST_CASE("one bad URL costs one pair and is reported once") {
    TempDir dir;
    const auto report = ingest_fixture(dir / "store", "pairs_bad_url.csv");
    CHECK(count_files(dir / "store") == 22);
    CHECK(report.pairs_ok == 11);
    CHECK(report.pairs_failed == 1);
    REQUIRE(report.failures.size() == 1);
    CHECK(report.failures[0].article_id == "a24");
    CHECK(report.failures[0].pair_ids == std::vector<std::string>{"a23_a24"});
    const json j = report;
    CHECK(j.at("failures").size() == 1);
}

TEST_CASE("unreadable pairs file is a format error") {
    TempDir dir;
    CHECK_THROWS_AS(ingest(dir / "none.csv", dir / "store", {}), FormatError);
}

// ---- stages ---------------------------------------------------------------

TEST_CASE("stopword removal only changes the text fed to features") {
    TempDir dir;
    ingest_fixture(dir / "store");
    auto config = fixture_config(dir);
    const auto ner = make_ner(config);
    const auto article = corpus::ArticleStore(dir / "store").load("a01");
    const auto stripped = article_features(article, config, *ner);
    config.remove_stopwords = false;
    const auto plain = article_features(article, config, *ner);
    const auto overall = metric_index(MetricKind::Overall);
    CHECK(stripped[overall].spans[0].find(" the ") == std::string::npos);
    CHECK(plain[overall].spans[0].find(" the ") != std::string::npos);
    CHECK(stripped[metric_index(MetricKind::Geography)].spans ==
          std::vector<std::string>{"Paris", "Paris", "Berlin", "France"});
}

TEST_CASE("full pipeline writes every artifact and a complete report") {
    TempDir dir;
    ingest_fixture(dir / "store");
    const auto config = fixture_config(dir);
    const auto report = run_pipeline(config);
    CHECK(report.cells.size() == 14);
    for (const auto& c : report.cells) CHECK(c.n == 4);

    const Layout layout{config.output_dir};
    for (const auto& p : {layout.embeddings_file(), layout.split_file(), layout.scores_file(), layout.report_file(),
                          layout.report_text_file(), layout.manifest_file()})
        CHECK(fs::exists(p));
    for (MetricKind m : kAllMetrics) {
        const auto cp = model::load_checkpoint(layout.checkpoint_file(m));
        CHECK(cp.loss_history.size() == 8);
        CHECK(cp.head.input_dim == 768);
        CHECK(cp.head.metric == m);
    }
    const auto manifest = json::parse(read_file(layout.manifest_file()));
    CHECK(manifest.at("failed_stage").is_null());
    CHECK(manifest.at("stages").size() == 6);

    const auto split = json::parse(read_file(layout.split_file())).get<corpus::DatasetSplit>();
    CHECK(split.train.size() == 8);
    CHECK(split.test.size() == 4);
}

TEST_CASE("pipeline output is reproducible byte for byte") {
    TempDir dir;
    ingest_fixture(dir / "store");
    ConfigOverrides second;
    second.output_dir = dir / "run2";
    run_pipeline(fixture_config(dir));
    run_pipeline(fixture_config(dir, second));
    CHECK(read_file(dir / "run/report.json") == read_file(dir / "run2/report.json"));
    CHECK(read_file(dir / "run/scores.json") == read_file(dir / "run2/scores.json"));
    CHECK(read_file(dir / "run/embeddings.json") == read_file(dir / "run2/embeddings.json"));
    for (MetricKind m : kAllMetrics) {
        const auto name = std::string(metric_name(m)) + ".json";
        CHECK(read_file(dir / "run/checkpoints" / name) == read_file(dir / "run2/checkpoints" / name));
    }
}

TEST_CASE("stage-by-stage run matches the one-shot pipeline") {
    TempDir dir;
    ingest_fixture(dir / "store");
    run_pipeline(fixture_config(dir));

    ConfigOverrides ov;
    ov.output_dir = dir / "staged";
    const auto config = fixture_config(dir, ov);
    const auto corpus = load_corpus(config);
    const auto ner = make_ner(config);
    run_features(config, corpus, *ner);
    const auto features = load_features(config, corpus, ner->name());
    const auto provider = make_provider(config);
    save_embeddings(Layout{config.output_dir}.embeddings_file(), provider->name(),
                    run_embed(config, features, *provider));
    const auto pooled = load_embeddings(Layout{config.output_dir}.embeddings_file());
    const auto trained = run_train(config, corpus.pairs, pooled);
    const auto models = model::MetricModelSet::load(Layout{config.output_dir}.checkpoints_dir());
    run_evaluate(config, corpus.pairs, pooled, trained.split, models);
    run_report(config, load_scores(Layout{config.output_dir}.scores_file()));

    CHECK(read_file(dir / "run/report.json") == read_file(dir / "staged/report.json"));
}

TEST_CASE("embedding requests feed a cache provider that completes the pipeline") {
    TempDir dir;
    ingest_fixture(dir / "store");
    const auto config = fixture_config(dir);
    const auto corpus = load_corpus(config);
    const auto ner = make_ner(config);
    const auto requests = export_requests(run_features(config, corpus, *ner), config.max_tokens);
    CHECK_FALSE(requests.empty());
    embedding::write_export_requests(dir / "requests.jsonl", requests);

    // Stand-in exporter: embed every request with the stub.
    const embedding::StubProvider stub(32, 1);
    embedding::EmbeddingCache cache{"stand-in", 32, {}};
    for (const auto& r : embedding::read_export_requests(dir / "requests.jsonl"))
        cache.entries[r.key] = stub.embed(r.text);
    embedding::write_cache(dir / "cache.tsv", cache);

    ConfigOverrides ov;
    ov.provider = "cache:" + (dir / "cache.tsv").string();
    ov.output_dir = dir / "cached";
    const auto report = run_pipeline(fixture_config(dir, ov));
    CHECK(report.cells.size() == 14);

    // Dropping one entry makes the embed stage fail and name the key.
    const auto missing = cache.entries.begin()->first;
    cache.entries.erase(cache.entries.begin());
    embedding::write_cache(dir / "cache.tsv", cache);
    ov.output_dir = dir / "broken";
    try {
        run_pipeline(fixture_config(dir, ov));
        FAIL("expected StageError");
    } catch (const StageError& e) {
        CHECK(e.stage() == "embed");
        CHECK(e.exit_code() == 4);
        CHECK(std::string(e.what()).find(missing) != std::string::npos);
    }
    const auto manifest = json::parse(read_file(dir / "broken/MANIFEST.json"));
    CHECK(manifest.at("failed_stage") == "embed");
    CHECK(fs::exists(dir / "broken/features"));
}

TEST_CASE("pipeline without seeds is rejected before any work") {
    TempDir dir;
    ingest_fixture(dir / "store");
    auto config = fixture_config(dir);
    config.split_seed.reset();
    CHECK_THROWS_AS(run_pipeline(config), ConfigError);
    CHECK_FALSE(fs::exists(dir / "run"));
}

// ---- predict --------------------------------------------------------------

TEST_CASE("predicting a pair reports scores, cosines and fallbacks") {
    TempDir dir;
    ingest_fixture(dir / "store");
    const auto config = fixture_config(dir);
    const corpus::ArticleStore store(dir / "store");

    CHECK_THROWS_AS(predict_articles(config, store.load("a01"), store.load("a02")), NotFoundError);
    run_pipeline(config);

    const auto same = predict_articles(config, store.load("a01"), store.load("a01"));
    for (const char* m : {"narrative", "style", "tone", "overall"})
        CHECK(same.at("baseline_cosine").at(m).get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& [m, score] : same.at("scores").items()) {
        CHECK(score.get<double>() > 0.0);
        CHECK(score.get<double>() < 1.0);
    }

    // a10 is a recipe with no place names.
    const auto recipe = predict_articles(config, store.load("a09"), store.load("a10"));
    CHECK(recipe.at("fallback_used").at("geography").at("article2") == true);
    CHECK(recipe.at("fallback_used").at("overall").at("article2") == false);
    CHECK(recipe == predict_articles(config, store.load("a09"), store.load("a10")));
}

}
