#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "newsim/corpus/fetch.hpp"
#include "newsim/corpus/html_extract.hpp"
#include "newsim/embedding/provider.hpp"
#include "newsim/features/gazetteer.hpp"
#include "newsim/model/train.hpp"

namespace newsim::pipeline {

// Everything a run needs. Relative paths in the JSON file are resolved
// against the file's directory. Split and train seeds have no defaults.
struct RunConfig {
    std::filesystem::path pairs_csv;
    std::filesystem::path store_dir;
    std::filesystem::path output_dir;

    std::string provider = "stub"; // "stub" or "cache:<path>"
    std::size_t stub_dim = embedding::kDefaultDim;
    std::uint64_t stub_seed = 0;
    std::size_t max_tokens = embedding::kDefaultMaxTokens;

    std::string ner; // "gazetteer:<lexicon-dir>"
    bool remove_stopwords = true;

    double split_ratio = 0.67;
    std::optional<std::uint64_t> split_seed;

    model::TrainConfig train;
    std::optional<std::uint64_t> train_seed;
    std::vector<std::size_t> hidden{model::kHidden1, model::kHidden2};

    std::vector<double> tolerances{0.2, 0.33, 0.5};
    corpus::ExtractOptions extract;
    corpus::PolitenessConfig fetch;
};

// Command-line overrides; unset fields keep the file's value.
struct ConfigOverrides {
    std::optional<std::filesystem::path> pairs_csv;
    std::optional<std::filesystem::path> store_dir;
    std::optional<std::filesystem::path> output_dir;
    std::optional<std::string> provider;
    std::optional<std::size_t> epochs;
    std::optional<std::uint64_t> split_seed;
    std::optional<std::uint64_t> train_seed;
};

// Parses and resolves the file. Throws ConfigError on unknown keys, bad
// types or out-of-range values.
RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir,
                       const ConfigOverrides& overrides = {});

enum class Requirement { Corpus, Seeds, Provider, Ner };

// Checks that referenced inputs exist and seeds are present for the stages
// about to run. Throws ConfigError naming the first problem.
void validate(const RunConfig& config, const std::vector<Requirement>& needs);

std::unique_ptr<embedding::EmbeddingProvider> make_provider(const RunConfig& config);
std::unique_ptr<features::NerProvider> make_ner(const RunConfig& config);

} // namespace newsim::pipeline
