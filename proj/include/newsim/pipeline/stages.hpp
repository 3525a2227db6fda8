#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "newsim/corpus/article.hpp"
#include "newsim/corpus/pairs.hpp"
#include "newsim/corpus/split.hpp"
#include "newsim/embedding/cache_file.hpp"
#include "newsim/eval/report.hpp"
#include "newsim/model/checkpoint.hpp"
#include "newsim/model/predict.hpp"
#include "newsim/pipeline/config.hpp"

namespace newsim::pipeline {

namespace fs = std::filesystem;

// Files a run writes under output_dir.
struct Layout {
    fs::path root;

    fs::path features_dir() const { return root / "features"; }
    fs::path embeddings_file() const { return root / "embeddings.json"; }
    fs::path split_file() const { return root / "split.json"; }
    fs::path checkpoints_dir() const { return root / "checkpoints"; }
    fs::path checkpoint_file(MetricKind m) const {
        return checkpoints_dir() / (std::string(metric_name(m)) + ".json");
    }
    fs::path scores_file() const { return root / "scores.json"; }
    fs::path report_file() const { return root / "report.json"; }
    fs::path report_text_file() const { return root / "report.txt"; }
    fs::path manifest_file() const { return root / "MANIFEST.json"; }
};

// ---- ingest ---------------------------------------------------------------

struct IngestOptions {
    corpus::PolitenessConfig fetch;
    corpus::ExtractOptions extract;
    bool refresh = false; // refetch articles already in the store
    std::function<corpus::Timestamp()> clock;
};

struct IngestFailure {
    std::string article_id;
    std::string url;
    std::string error;
    std::vector<std::string> pair_ids;
};

struct IngestReport {
    std::size_t pairs_total = 0;
    std::size_t pairs_ok = 0;
    std::size_t pairs_failed = 0;
    std::size_t articles_stored = 0;   // written by this run
    std::size_t articles_existing = 0; // already present and reused
    std::vector<IngestFailure> failures;
    corpus::LoadReport load;
};

void to_json(nlohmann::json& j, const IngestReport& r);

// Fetches, extracts and stores every article referenced by the pairs CSV.
// Only articles of pairs whose two articles both succeed are stored; each
// failed article is reported once. Throws FormatError for an unreadable CSV.
IngestReport ingest(const fs::path& pairs_csv, const fs::path& store_dir, const IngestOptions& options);

// ---- corpus ---------------------------------------------------------------

struct Corpus {
    std::vector<corpus::PairRecord> pairs; // pairs whose articles are in the store
    corpus::LoadReport report;
    std::map<std::string, corpus::ArticleRecord> articles;
};

Corpus load_corpus(const RunConfig& config);

// ---- features -------------------------------------------------------------

using ArticleFeatures = std::map<std::string, PerMetric<features::FeatureBundle>>;

// Stopword removal (if enabled) then all seven bundles for one article.
PerMetric<features::FeatureBundle> article_features(const corpus::ArticleRecord& article,
                                                    const RunConfig& config,
                                                    const features::NerProvider& ner);

// Extracts and persists bundles for every corpus article.
ArticleFeatures run_features(const RunConfig& config, const Corpus& corpus, const features::NerProvider& ner);

// Reads persisted bundles; NotFoundError if any is missing.
ArticleFeatures load_features(const RunConfig& config, const Corpus& corpus, const std::string& ner_name);

// ---- embeddings -----------------------------------------------------------

using PooledEmbeddings = std::map<std::string, PerMetric<embedding::EmbeddingVector>>;

PooledEmbeddings run_embed(const RunConfig& config, const ArticleFeatures& features,
                           const embedding::EmbeddingProvider& provider);

// Every distinct post-truncation span, keyed for the external exporter.
std::vector<embedding::ExportRequest> export_requests(const ArticleFeatures& features, std::size_t max_tokens);

void save_embeddings(const fs::path& path, const std::string& provider_name, const PooledEmbeddings& pooled);
PooledEmbeddings load_embeddings(const fs::path& path);

// ---- train / evaluate / report --------------------------------------------

struct TrainOutcome {
    corpus::DatasetSplit split;
    PerMetric<model::Checkpoint> checkpoints;
};

// Splits the pairs and trains the seven heads (concurrently); writes the split
// and one checkpoint per metric.
TrainOutcome run_train(const RunConfig& config, const std::vector<corpus::PairRecord>& pairs,
                       const PooledEmbeddings& pooled);

// Scores the test pairs with both approaches; writes scores.json.
eval::ScoredSets run_evaluate(const RunConfig& config, const std::vector<corpus::PairRecord>& pairs,
                              const PooledEmbeddings& pooled, const corpus::DatasetSplit& split,
                              const model::MetricModelSet& models);

void save_scores(const fs::path& path, const eval::ScoredSets& scored);
eval::ScoredSets load_scores(const fs::path& path);

// Writes report.json and report.txt.
eval::EvalReport run_report(const RunConfig& config, const eval::ScoredSets& scored);

// ---- whole pipeline -------------------------------------------------------

// Raised by run_pipeline after the MANIFEST records the failed stage.
class StageError : public Error {
public:
    StageError(std::string stage, int exit_code, const std::string& message)
        : Error(stage + ": " + message), stage_(std::move(stage)), exit_code_(exit_code) {}

    const std::string& stage() const noexcept { return stage_; }
    int exit_code() const noexcept { return exit_code_; }

private:
    std::string stage_;
    int exit_code_;
};

// Exit code for an exception: 2 input error, 3 missing artifact, 4 stage failure.
int exit_code_for(const std::exception& e);

// features -> embeddings -> split + training -> evaluation -> report.
eval::EvalReport run_pipeline(const RunConfig& config);

// ---- predict --------------------------------------------------------------

// Seven head scores, raw baseline cosines and fallback flags for one article
// pair, as a JSON object. Loads heads from the run's checkpoints.
nlohmann::json predict_articles(const RunConfig& config, const corpus::ArticleRecord& first,
                                const corpus::ArticleRecord& second);

} // namespace newsim::pipeline
