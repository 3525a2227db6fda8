#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "newsim/metric.hpp"

namespace newsim::corpus {

// Raw scores use the dataset's scale: 1 = most similar, 4 = most dissimilar.
struct PairRecord {
    std::string pair_id;
    std::string article1_id;
    std::string article2_id;
    std::string url1;
    std::string url2;
    std::string lang_pair; // "<lang1>-<lang2>"
    PerMetric<double> raw_scores{};
};

// Scores on [0, 1] with 1 = most similar.
struct NormalizedPair {
    std::string pair_id;
    PerMetric<double> scores{};
};

// (4 - raw) / 3. Throws RangeError unless 1 <= raw <= 4.
double normalize_score(double raw);

// Inverse of normalize_score: 4 - 3 * score.
double denormalize_score(double score);

NormalizedPair normalize(const PairRecord& pair);

struct LoadReport {
    std::size_t rows = 0;
    std::size_t loaded = 0;
    std::size_t skipped_missing_score = 0;
    std::size_t skipped_invalid_score = 0;
    std::size_t skipped_unavailable = 0;
    std::map<std::string, std::size_t> language_histogram; // over loaded pairs
};

struct LoadOptions {
    // Accepted header names per logical column, matched case-insensitively.
    // Metric columns are matched by metric name.
    std::map<std::string, std::vector<std::string>> aliases{
        {"pair_id", {"pair_id"}},
        {"url1", {"url1", "link1"}},
        {"url2", {"url2", "link2"}},
        {"id1", {"id1"}},
        {"id2", {"id2"}},
        {"lang1", {"lang1", "url1_lang"}},
        {"lang2", {"lang2", "url2_lang"}},
    };
    // Returns false for article ids that cannot be used (e.g. fetch failed).
    // Pairs referencing them are skipped and counted.
    std::function<bool(const std::string& article_id)> is_available;
};

struct LoadResult {
    std::vector<PairRecord> pairs;
    LoadReport report;
};

// Parses the pairs CSV. When id columns are absent the ids are taken from a
// pair_id of the form "<id1>_<id2>". Throws FormatError for an unreadable file
// or a header missing a required column.
LoadResult load_pairs(const std::filesystem::path& path, const LoadOptions& options = {});

// RFC 4180 record splitter; exposed for tests.
std::vector<std::vector<std::string>> parse_csv(std::string_view content);

} // namespace newsim::corpus
