#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "newsim/embedding/vector.hpp"

namespace newsim::embedding {

// In-memory form of the embedding-cache file:
//   line 1:  dim=<d> provider=<name>
//   then:    <key>\t<d space-separated decimals, 9 significant digits>
struct EmbeddingCache {
    std::string provider;
    std::size_t dim = 0;
    std::map<std::string, EmbeddingVector> entries;
};

// Throws DimensionError if an entry's dim differs from cache.dim.
void write_cache(const std::filesystem::path& path, const EmbeddingCache& cache);

// Throws FormatError on a bad header, a row whose length differs from the
// header dim, or a malformed number.
EmbeddingCache read_cache(const std::filesystem::path& path);

struct ExportRequest {
    std::string key; // cache_key(text)
    std::string text;
};

// JSON lines {"key": ..., "text": ...}, one per distinct key, sorted by key.
void write_export_requests(const std::filesystem::path& path, std::vector<ExportRequest> requests);
std::vector<ExportRequest> read_export_requests(const std::filesystem::path& path);

} // namespace newsim::embedding
